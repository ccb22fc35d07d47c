//! Scenario files: the TOML schema, validation, and profile synthesis.
//!
//! A scenario file fully determines a run except for the seed. Top-level
//! keys:
//!
//! ```toml
//! alpha = 0.5                   # consumer benefit curvature (price/kWh²)
//! price_bounds = [1.5, 5.5]     # admissible price interval (per kWh)
//! horizon = 48                  # hourly steps per run
//! utility_cap = "continuous"    # optional: "continuous" | "as-written"
//!
//! [solver]                      # optional, defaults shown
//! n_nom = 80
//! n_max = 320
//! t_max = 200
//!
//! [[grid_cost]]                 # one entry, or one per step
//! a = 0.01
//! b = 0.1
//! c = 1.0
//!
//! [[microgrids]]                # storage-equipped microgrids first
//! id = 1
//! omega = 2.0
//! demand_curve = { c2 = 0.01, c1 = -0.12, c0 = 0.26 }
//! storage = { cap_max = 250.0, cap_secure = 125.0, rate_limit = 25.0, initial = 187.5 }
//!
//! [profiles]                    # either synthetic...
//! kind = "synthetic"
//! seed = 7
//! period = 24
//! noise = 0.05
//! [[profiles.series]]           # one per microgrid, microgrid order
//! base_mean = 100.0
//! base_amplitude = 0.25
//! base_peak_step = 18
//! res_mean = 40.0
//! res_amplitude = 0.6
//! res_peak_step = 12
//!
//! # ...or explicit (horizon rows, one column per microgrid):
//! # [profiles]
//! # kind = "explicit"
//! # base_load = [[100.0, 80.0], ...]
//! # res_output = [[40.0, 16.0], ...]
//! ```
//!
//! Synthetic profiles are diurnal sinusoids with multiplicative uniform
//! noise, drawn from their own ChaCha8 stream (`profiles.seed`), one base
//! draw then one renewable draw per microgrid per step. Loading a scenario
//! materializes the profiles, so two files describing the same series are
//! interchangeable from there on.

use rand::distr::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::model::{CapMode, GridCostParams, MicrogridSpec, ScenarioConfig};
use crate::moia::MoiaParams;
use crate::scalar::Scalar;

/// Solver sizing from a scenario file's `[solver]` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    /// Nominal population size.
    pub n_nom: usize,
    /// Expansion ceiling.
    pub n_max: usize,
    /// Iterations per solver run.
    pub t_max: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            n_nom: 80,
            n_max: 320,
            t_max: 200,
        }
    }
}

impl SolverSettings {
    /// Full solver parameters for one run stream.
    pub fn params(&self, seed: u64) -> MoiaParams {
        MoiaParams {
            n_nom: self.n_nom,
            n_max: self.n_max,
            t_max: self.t_max,
            seed,
        }
    }
}

/// A loaded, validated scenario: problem configuration plus solver sizing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario<T> {
    /// Network, market, and profile configuration.
    pub config: ScenarioConfig<T>,
    /// Solver sizing for every step of the run.
    pub solver: SolverSettings,
}

/// Per-microgrid parameters of the synthetic profile generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec<T> {
    /// Mean base demand (kWh per step); positive.
    pub base_mean: T,
    /// Relative seasonal swing of the base demand, in [0, 1).
    pub base_amplitude: T,
    /// Step at which base demand peaks.
    pub base_peak_step: usize,
    /// Mean renewable output (kWh per step); positive.
    pub res_mean: T,
    /// Relative seasonal swing of the renewable output, in [0, 1).
    pub res_amplitude: T,
    /// Step at which renewable output peaks.
    pub res_peak_step: usize,
}

fn default_period() -> usize {
    24
}

/// Synthetic diurnal profile specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticProfiles<T> {
    /// Seed of the generator's ChaCha8 stream.
    pub seed: u64,
    /// Steps per diurnal cycle.
    #[serde(default = "default_period")]
    pub period: usize,
    /// Relative amplitude of multiplicative uniform noise; `amplitude +
    /// noise` must stay below 1 so every value stays positive.
    pub noise: T,
    /// One entry per microgrid, microgrid order.
    pub series: Vec<SeriesSpec<T>>,
}

/// Profile section of a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfilesSpec<T> {
    /// Materialized series, `horizon` rows of one value per microgrid.
    Explicit {
        /// Base demand per step and microgrid (kWh).
        base_load: Vec<Vec<T>>,
        /// Renewable output per step and microgrid (kWh).
        res_output: Vec<Vec<T>>,
    },
    /// Generated diurnal series.
    Synthetic(SyntheticProfiles<T>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile<T> {
    alpha: T,
    price_bounds: (T, T),
    horizon: usize,
    #[serde(default)]
    utility_cap: CapMode,
    #[serde(default)]
    solver: SolverSettings,
    grid_cost: Vec<GridCostParams<T>>,
    microgrids: Vec<MicrogridSpec<T>>,
    profiles: ProfilesSpec<T>,
}

impl<T: Scalar> SyntheticProfiles<T> {
    // `!(x >= 0)` instead of `x < 0`: a NaN value must fail validation too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self, microgrid_count: usize) -> Result<(), Error> {
        if self.series.len() != microgrid_count {
            return Err(Error::InvalidScenario(format!(
                "profiles define {} series for {} microgrids",
                self.series.len(),
                microgrid_count
            )));
        }
        if self.period == 0 {
            return Err(Error::InvalidScenario(
                "profile period must be at least 1".into(),
            ));
        }
        if !(self.noise >= T::zero()) {
            return Err(Error::InvalidScenario(
                "profile noise must be non-negative".into(),
            ));
        }
        for (i, s) in self.series.iter().enumerate() {
            let positive_means = s.base_mean > T::zero() && s.res_mean > T::zero();
            let sane_amplitudes = s.base_amplitude >= T::zero()
                && s.res_amplitude >= T::zero()
                && s.base_amplitude + self.noise < T::one()
                && s.res_amplitude + self.noise < T::one();
            if !positive_means || !sane_amplitudes {
                return Err(Error::InvalidScenario(format!(
                    "profile series {i} must have positive means and amplitude + noise < 1"
                )));
            }
        }
        Ok(())
    }

    /// Materializes `(base_load, res_output)` over `horizon` steps.
    ///
    /// Per step and microgrid: `mean · (1 + amplitude·cos(2π(k - peak)/period))
    /// · (1 + noise·u)` with `u` uniform on [-1, 1], base draw before
    /// renewable draw.
    pub fn generate(&self, horizon: usize) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let unit = Uniform::new_inclusive(-T::one(), T::one()).expect("fixed interval");
        let tau = T::c(std::f64::consts::TAU);
        let period = T::from_usize(self.period).expect("period fits scalar");
        let mut base = Vec::with_capacity(horizon);
        let mut res = Vec::with_capacity(horizon);
        for k in 0..horizon {
            let mut base_row = Vec::with_capacity(self.series.len());
            let mut res_row = Vec::with_capacity(self.series.len());
            for s in &self.series {
                let wave = |mean: T, amplitude: T, peak: usize, u: T| {
                    let offset = T::from_usize(k).expect("step fits scalar")
                        - T::from_usize(peak).expect("peak fits scalar");
                    let seasonal = T::one() + amplitude * (tau * offset / period).cos();
                    mean * seasonal * (T::one() + self.noise * u)
                };
                let u_base = rng.sample(&unit);
                base_row.push(wave(
                    s.base_mean,
                    s.base_amplitude,
                    s.base_peak_step,
                    u_base,
                ));
                let u_res = rng.sample(&unit);
                res_row.push(wave(s.res_mean, s.res_amplitude, s.res_peak_step, u_res));
            }
            base.push(base_row);
            res.push(res_row);
        }
        (base, res)
    }
}

impl<T: Scalar + Serialize + DeserializeOwned> Scenario<T> {
    /// Parses and validates a scenario from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        let file: ScenarioFile<T> = toml::from_str(text)?;
        let (base_load, res_output) = match file.profiles {
            ProfilesSpec::Explicit {
                base_load,
                res_output,
            } => (base_load, res_output),
            ProfilesSpec::Synthetic(spec) => {
                spec.validate(file.microgrids.len())?;
                spec.generate(file.horizon)
            }
        };
        let config = ScenarioConfig {
            microgrids: file.microgrids,
            alpha: file.alpha,
            utility_cap: file.utility_cap,
            grid_cost: file.grid_cost,
            price_bounds: file.price_bounds,
            horizon: file.horizon,
            base_load,
            res_output,
        };
        config.validate()?;
        let scenario = Self {
            config,
            solver: file.solver,
        };
        scenario.solver.params(0).validate()?;
        Ok(scenario)
    }

    /// Loads a scenario file from disk.
    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, Error> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

impl<T: Scalar + Serialize> Scenario<T> {
    /// Shortens the run to `horizon` steps, truncating profiles and any
    /// per-step cost schedule. Fails when no profile data covers the request.
    pub fn with_horizon(mut self, horizon: usize) -> Result<Self, Error> {
        if horizon == 0 || horizon > self.config.horizon {
            return Err(Error::InvalidScenario(format!(
                "horizon override {horizon} outside 1..={}",
                self.config.horizon
            )));
        }
        if self.config.grid_cost.len() > 1 {
            self.config.grid_cost.truncate(horizon);
        }
        self.config.base_load.truncate(horizon);
        self.config.res_output.truncate(horizon);
        self.config.horizon = horizon;
        Ok(self)
    }

    /// Hex SHA-256 of the canonical serialized scenario. Two runs with equal
    /// fingerprints and seeds produce identical traces.
    pub fn fingerprint(&self) -> String {
        let canonical = toml::to_string(self).expect("scenario serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
