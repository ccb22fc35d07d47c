//! Physical and economic model of a multi-microgrid network.
//!
//! A network has `N` microgrids attached to one distribution grid. The first
//! `N_s` of them own storage and are dispatchable: the coordinator chooses
//! how much energy each exchanges with the grid. The rest are passive — their
//! exchange is pinned to their demand net of renewable output. Demand at
//! every microgrid responds to the single network-wide energy price through a
//! quadratic elasticity curve.
//!
//! One simulation step is one hour, so energies per step (kWh) and average
//! power (kW) coincide numerically. Prices are per kWh.
//!
//! The coordinator's decision per step is an [`Antibody`]: the price plus the
//! storage-microgrid dispatches. [`evaluate`] maps a decision to the
//! four-entry minimization objective ([`ObjectiveVector`]): negated total
//! microgrid benefit, negated grid operator profit, negated total next-step
//! stored energy, and a hinge penalty that is zero exactly when all storage
//! ramp and capacity limits hold.

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::Error;
use crate::scalar::Scalar;

/// Quadratic relative price response `h(p) = c2·p² + c1·p + c0` of a
/// microgrid's demand.
///
/// Demand at price `p` is `(1 + h(p)) · base`, so `h == 0` leaves the base
/// profile unchanged and `h == -1` extinguishes demand entirely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandCurve<T> {
    /// Quadratic coefficient (1/price²).
    pub c2: T,
    /// Linear coefficient (1/price).
    pub c1: T,
    /// Constant offset (dimensionless).
    pub c0: T,
}

impl<T: Scalar> DemandCurve<T> {
    /// Relative demand response at `price`, evaluated in Horner form.
    pub fn elasticity(&self, price: T) -> T {
        (self.c2 * price + self.c1) * price + self.c0
    }

    /// Demand (kWh per step) at `price` for a base level `base`.
    pub fn demand(&self, price: T, base: T) -> T {
        (T::one() + self.elasticity(price)) * base
    }

    /// Exact minimum and maximum of the elasticity over `[lo, hi]`.
    ///
    /// For a quadratic the extrema sit at the endpoints or at the vertex, so
    /// no sampling is needed.
    pub fn elasticity_extrema(&self, lo: T, hi: T) -> (T, T) {
        let mut min = self.elasticity(lo);
        let mut max = self.elasticity(hi);
        if max < min {
            std::mem::swap(&mut min, &mut max);
        }
        if self.c2 != T::zero() {
            let vertex = -self.c1 / (T::c(2.0) * self.c2);
            if lo < vertex && vertex < hi {
                let at_vertex = self.elasticity(vertex);
                min = min.min(at_vertex);
                max = max.max(at_vertex);
            }
        }
        (min, max)
    }

    /// True when the demand response is non-increasing in price over
    /// `[lo, hi]`: the endpoint responses bracket the whole curve.
    pub fn monotone_on(&self, lo: T, hi: T) -> bool {
        if self.elasticity(hi) > self.elasticity(lo) {
            return false;
        }
        if self.c2 != T::zero() {
            let vertex = -self.c1 / (T::c(2.0) * self.c2);
            if lo < vertex && vertex < hi {
                return false;
            }
        }
        true
    }
}

/// Storage unit limits of a dispatchable microgrid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StorageSpec<T> {
    /// Usable capacity ceiling (kWh).
    pub cap_max: T,
    /// Security floor the unit must never drop below (kWh).
    pub cap_secure: T,
    /// Per-step charge/discharge ceiling (kWh per step).
    pub rate_limit: T,
    /// Stored energy at the start of a run (kWh); midpoint of the capacity
    /// band when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<T>,
}

impl<T: Scalar> StorageSpec<T> {
    /// Start-of-run stored energy: the configured value, or the midpoint of
    /// `[cap_secure, cap_max]`.
    pub fn initial_level(&self) -> T {
        self.initial
            .unwrap_or_else(|| (self.cap_secure + self.cap_max) / T::c(2.0))
    }
}

/// One microgrid: its demand behaviour, consumer benefit scale, and optional
/// storage.
///
/// `storage: None` marks a passive microgrid whose grid exchange is fixed by
/// demand and renewable output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicrogridSpec<T> {
    /// Stable identifier used in reports.
    pub id: usize,
    /// Marginal consumer benefit at zero consumption (price per kWh).
    pub omega: T,
    /// Relative demand response to price.
    pub demand_curve: DemandCurve<T>,
    /// Storage limits; absent for passive microgrids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub storage: Option<StorageSpec<T>>,
}

/// Quadratic generation cost `a·p² + b·p + c` of the grid operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCostParams<T> {
    /// Quadratic coefficient (price per kWh²); non-negative.
    pub a: T,
    /// Linear coefficient (price per kWh).
    pub b: T,
    /// Fixed cost per step.
    pub c: T,
}

impl<T: Scalar> GridCostParams<T> {
    /// Generation cost of supplying `power` kWh in one step.
    pub fn cost(&self, power: T) -> T {
        (self.a * power + self.b) * power + self.c
    }
}

/// How consumer benefit behaves past the saturation consumption `omega/alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapMode {
    /// Benefit stays at the quadratic branch's own maximum `omega²/(2·alpha)`,
    /// so the function is continuous. Default.
    #[default]
    Continuous,
    /// Benefit snaps to the saturation consumption value `omega/alpha`
    /// itself, reproducing a common piecewise form that is discontinuous
    /// unless `omega == 2`.
    AsWritten,
}

/// Exogenous snapshot of the network at one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState<T> {
    /// Stored energy of each storage microgrid (kWh), storage order.
    pub stored: Vec<T>,
    /// Base demand level of every microgrid this step (kWh).
    pub base_load: Vec<T>,
    /// Renewable output of every microgrid this step (kWh).
    pub res_output: Vec<T>,
}

impl<T: Scalar> NetworkState<T> {
    /// Checks dimensions against `microgrids`, positivity of loads and
    /// renewables, and that stored levels sit inside their capacity bands.
    // `!(x > 0)` instead of `x <= 0`: a NaN value must fail validation too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self, microgrids: &[MicrogridSpec<T>]) -> Result<(), Error> {
        let n = microgrids.len();
        let n_s = microgrids.iter().filter(|m| m.storage.is_some()).count();
        if self.stored.len() != n_s {
            return Err(Error::InvalidScenario(format!(
                "state has {} stored levels for {} storage microgrids",
                self.stored.len(),
                n_s
            )));
        }
        if self.base_load.len() != n || self.res_output.len() != n {
            return Err(Error::InvalidScenario(format!(
                "state has {} base loads / {} renewable outputs for {} microgrids",
                self.base_load.len(),
                self.res_output.len(),
                n
            )));
        }
        for (i, (b, v)) in self.base_load.iter().zip(&self.res_output).enumerate() {
            if !(*b > T::zero()) || !(*v > T::zero()) {
                return Err(Error::InvalidScenario(format!(
                    "microgrid {i} has non-positive base load or renewable output"
                )));
            }
        }
        for (j, (spec, level)) in microgrids
            .iter()
            .filter_map(|m| m.storage.as_ref())
            .zip(&self.stored)
            .enumerate()
        {
            if !(spec.cap_secure <= *level && *level <= spec.cap_max) {
                return Err(Error::InvalidScenario(format!(
                    "stored level {level} of storage microgrid {j} outside capacity band"
                )));
            }
        }
        Ok(())
    }
}

/// One candidate decision: the network price plus a grid exchange for each
/// storage microgrid (positive = drawing from the grid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antibody<T> {
    /// Energy price for the step (price per kWh).
    pub price: T,
    /// Grid exchange of each storage microgrid (kWh per step), storage order.
    pub dispatch: Vec<T>,
}

impl<T: Scalar> Antibody<T> {
    /// Flattens into the raw decision vector `[price, dispatch...]`.
    pub fn to_point(&self) -> Vec<T> {
        let mut point = Vec::with_capacity(1 + self.dispatch.len());
        point.push(self.price);
        point.extend_from_slice(&self.dispatch);
        point
    }

    /// Rebuilds from a raw decision vector `[price, dispatch...]`.
    ///
    /// # Panics
    ///
    /// Panics on an empty slice.
    pub fn from_point(point: &[T]) -> Self {
        assert!(!point.is_empty(), "decision vector needs at least a price");
        Self {
            price: point[0],
            dispatch: point[1..].to_vec(),
        }
    }
}

/// Four-entry objective vector; every entry is minimized.
///
/// Entries in order: negated total microgrid benefit, negated grid operator
/// profit, negated total next-step stored energy, and the storage-limit
/// penalty (zero exactly when the decision is feasible).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector<T>(pub [T; 4]);

impl<T: Scalar> ObjectiveVector<T> {
    /// Index of the penalty entry.
    pub const PENALTY: usize = 3;

    /// Total microgrid benefit (positive is good).
    pub fn microgrid_utility(&self) -> T {
        -self.0[0]
    }

    /// Grid operator profit (positive is good).
    pub fn grid_utility(&self) -> T {
        -self.0[1]
    }

    /// Total stored energy after the step (kWh).
    pub fn stored_total(&self) -> T {
        -self.0[2]
    }

    /// Storage-limit penalty; zero exactly when feasible.
    pub fn penalty(&self) -> T {
        self.0[Self::PENALTY]
    }

    /// The raw minimized entries.
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }
}

/// Full problem configuration: the network, market parameters, exogenous
/// profiles, and the run horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig<T> {
    /// Microgrids, storage-equipped ones first.
    pub microgrids: Vec<MicrogridSpec<T>>,
    /// Consumer benefit curvature shared by all microgrids (price per kWh²).
    pub alpha: T,
    /// Saturation behaviour of the consumer benefit function.
    #[serde(default)]
    pub utility_cap: CapMode,
    /// Grid generation cost per step: one entry reused for every step, or
    /// one entry per step.
    pub grid_cost: Vec<GridCostParams<T>>,
    /// Admissible price interval `(min, max)`.
    pub price_bounds: (T, T),
    /// Number of hourly steps in a run.
    pub horizon: usize,
    /// Base demand per step and microgrid (`horizon × N`, kWh).
    pub base_load: Vec<Vec<T>>,
    /// Renewable output per step and microgrid (`horizon × N`, kWh).
    pub res_output: Vec<Vec<T>>,
}

impl<T: Scalar> ScenarioConfig<T> {
    /// Number of microgrids.
    pub fn count(&self) -> usize {
        self.microgrids.len()
    }

    /// Number of storage-equipped (dispatchable) microgrids.
    pub fn storage_count(&self) -> usize {
        self.microgrids
            .iter()
            .filter(|m| m.storage.is_some())
            .count()
    }

    /// Storage specs in microgrid order.
    pub fn storage_specs(&self) -> impl Iterator<Item = &StorageSpec<T>> {
        self.microgrids.iter().filter_map(|m| m.storage.as_ref())
    }

    /// Grid cost parameters effective at step `k`.
    pub fn grid_cost_at(&self, k: usize) -> &GridCostParams<T> {
        if self.grid_cost.len() == 1 {
            &self.grid_cost[0]
        } else {
            &self.grid_cost[k]
        }
    }

    /// Start-of-run stored levels, storage order.
    pub fn initial_stored(&self) -> Vec<T> {
        self.storage_specs().map(|s| s.initial_level()).collect()
    }

    /// Snapshot of the network at step `k` with the given stored levels.
    pub fn state_at(&self, k: usize, stored: Vec<T>) -> NetworkState<T> {
        NetworkState {
            stored,
            base_load: self.base_load[k].clone(),
            res_output: self.res_output[k].clone(),
        }
    }

    /// Checks every documented configuration constraint. All other functions
    /// in this module assume a validated configuration.
    // `!(x > 0)` instead of `x <= 0`: a NaN value must fail validation too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), Error> {
        if self.microgrids.is_empty() {
            return Err(Error::InvalidScenario("no microgrids".into()));
        }
        let first_passive = self
            .microgrids
            .iter()
            .position(|m| m.storage.is_none())
            .unwrap_or(self.microgrids.len());
        if self.microgrids[first_passive..]
            .iter()
            .any(|m| m.storage.is_some())
        {
            return Err(Error::InvalidScenario(
                "storage microgrids must precede passive ones".into(),
            ));
        }
        if !(self.alpha > T::zero()) {
            return Err(Error::InvalidScenario("alpha must be positive".into()));
        }
        let (lo, hi) = self.price_bounds;
        if !(lo < hi) {
            return Err(Error::InvalidScenario(format!(
                "price bounds [{lo}, {hi}] are not an interval"
            )));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidScenario("horizon must be at least 1".into()));
        }
        if self.grid_cost.len() != 1 && self.grid_cost.len() != self.horizon {
            return Err(Error::InvalidScenario(format!(
                "grid cost schedule has {} entries; expected 1 or {}",
                self.grid_cost.len(),
                self.horizon
            )));
        }
        for gc in &self.grid_cost {
            if !(gc.a >= T::zero()) {
                return Err(Error::InvalidScenario(
                    "grid cost quadratic coefficient must be non-negative".into(),
                ));
            }
        }
        for m in &self.microgrids {
            if !(m.omega > T::zero()) {
                return Err(Error::InvalidScenario(format!(
                    "microgrid {} needs a positive benefit coefficient",
                    m.id
                )));
            }
            // Demand must stay non-negative everywhere on the price interval,
            // otherwise objective evaluation is partial over the search box.
            let (h_min, _) = m.demand_curve.elasticity_extrema(lo, hi);
            if h_min < -T::one() {
                return Err(Error::InvalidScenario(format!(
                    "microgrid {} demand goes negative inside the price interval",
                    m.id
                )));
            }
            if let Some(s) = &m.storage {
                if !(T::zero() < s.cap_secure && s.cap_secure <= s.cap_max) {
                    return Err(Error::InvalidScenario(format!(
                        "microgrid {} capacity band [{}, {}] is invalid",
                        m.id, s.cap_secure, s.cap_max
                    )));
                }
                if !(s.rate_limit > T::zero()) {
                    return Err(Error::InvalidScenario(format!(
                        "microgrid {} needs a positive charge/discharge limit",
                        m.id
                    )));
                }
                let initial = s.initial_level();
                if !(s.cap_secure <= initial && initial <= s.cap_max) {
                    return Err(Error::InvalidScenario(format!(
                        "microgrid {} initial level {initial} outside capacity band",
                        m.id
                    )));
                }
            }
        }
        if self.base_load.len() != self.horizon || self.res_output.len() != self.horizon {
            return Err(Error::InvalidScenario(format!(
                "profiles cover {} / {} steps for horizon {}",
                self.base_load.len(),
                self.res_output.len(),
                self.horizon
            )));
        }
        for k in 0..self.horizon {
            let state = self.state_at(k, self.initial_stored());
            state.validate(&self.microgrids)?;
        }
        Ok(())
    }
}

/// Stored energy after one step: current level plus grid exchange, minus
/// demand, plus renewable output, evaluated in exactly that order.
pub fn storage_step<T: Scalar>(stored: T, dispatch: T, demand: T, res: T) -> T {
    ((stored + dispatch) - demand) + res
}

/// Grid exchange of a passive microgrid: demand net of renewable output.
pub fn nonstorage_dispatch<T: Scalar>(demand: T, res: T) -> T {
    demand - res
}

/// Consumer benefit of consuming `demand` at marginal-benefit scale `omega`:
/// quadratic and increasing up to the saturation consumption `omega/alpha`,
/// capped beyond it according to `mode`. Assumes `demand >= 0`.
pub fn consumer_value<T: Scalar>(demand: T, omega: T, alpha: T, mode: CapMode) -> T {
    let saturation = omega / alpha;
    if demand <= saturation {
        omega * demand - alpha / T::c(2.0) * demand * demand
    } else {
        match mode {
            CapMode::Continuous => omega * omega / (T::c(2.0) * alpha),
            CapMode::AsWritten => saturation,
        }
    }
}

/// Total microgrid benefit: consumer value minus energy bill, summed across
/// the network.
///
/// `demands` and `omegas` pair up index by index. Rejects negative demand,
/// for which consumer value is undefined.
pub fn utility_microgrids<T: Scalar>(
    demands: &[T],
    price: T,
    omegas: &[T],
    alpha: T,
    mode: CapMode,
) -> Result<T, Error> {
    assert_eq!(
        demands.len(),
        omegas.len(),
        "one benefit scale per microgrid"
    );
    let mut total = T::zero();
    for (index, (&d, &omega)) in demands.iter().zip(omegas).enumerate() {
        if d < T::zero() {
            return Err(Error::NegativeDemand {
                index,
                demand: d.to_f64().unwrap_or(f64::NAN),
            });
        }
        total += consumer_value(d, omega, alpha, mode) - price * d;
    }
    Ok(total)
}

/// Grid operator profit: energy sales minus quadratic generation cost for
/// the net exchange `total_dispatch`.
pub fn utility_grid<T: Scalar>(total_dispatch: T, price: T, cost: &GridCostParams<T>) -> T {
    price * total_dispatch - cost.cost(total_dispatch)
}

/// Storage-limit penalty: per storage microgrid, hinge terms for exceeding
/// the charge/discharge limit, dropping below the security floor, and
/// overflowing the capacity ceiling. Zero exactly when every limit holds.
pub fn constraint_penalty<T: Scalar>(
    state: &NetworkState<T>,
    microgrids: &[MicrogridSpec<T>],
    next_stored: &[T],
) -> T {
    let zero = T::zero();
    let mut total = zero;
    for ((spec, &now), &next) in microgrids
        .iter()
        .filter_map(|m| m.storage.as_ref())
        .zip(&state.stored)
        .zip(next_stored)
    {
        total += ((next - now).abs() - spec.rate_limit).max(zero);
        total += (spec.cap_secure - next).max(zero);
        total += (next - spec.cap_max).max(zero);
    }
    total
}

/// Direct check of the same storage limits [`constraint_penalty`] scores:
/// charge/discharge within the rate limit and next level inside the capacity
/// band, for every storage microgrid.
///
/// Implemented as plain inequalities — deliberately not via the penalty — so
/// the two can cross-check each other.
pub fn within_storage_limits<T: Scalar>(
    state: &NetworkState<T>,
    microgrids: &[MicrogridSpec<T>],
    next_stored: &[T],
) -> bool {
    microgrids
        .iter()
        .filter_map(|m| m.storage.as_ref())
        .zip(&state.stored)
        .zip(next_stored)
        .all(|((spec, &now), &next)| {
            (next - now).abs() <= spec.rate_limit && spec.cap_secure <= next && next <= spec.cap_max
        })
}

/// Demands, per-microgrid grid exchange, and next stored levels implied by a
/// decision: the physical sub-pipeline shared by objective evaluation and
/// feasibility checking.
#[derive(Debug, Clone, PartialEq)]
pub struct Flows<T> {
    /// Demand of every microgrid at the decision's price (kWh).
    pub demands: Vec<T>,
    /// Grid exchange of every microgrid (kWh): the decision's dispatch for
    /// storage microgrids, demand net of renewables for passive ones.
    pub dispatch: Vec<T>,
    /// Stored energy of each storage microgrid after the step (kWh).
    pub stored_next: Vec<T>,
}

/// Computes the flows a decision induces on the current state.
///
/// # Panics
///
/// Panics when the decision's dispatch length does not match the number of
/// storage microgrids.
pub fn flows<T: Scalar>(
    antibody: &Antibody<T>,
    state: &NetworkState<T>,
    config: &ScenarioConfig<T>,
) -> Flows<T> {
    let n_s = config.storage_count();
    assert_eq!(
        antibody.dispatch.len(),
        n_s,
        "decision must dispatch every storage microgrid"
    );
    let n = config.count();
    let mut demands = Vec::with_capacity(n);
    let mut dispatch = Vec::with_capacity(n);
    let mut stored_next = Vec::with_capacity(n_s);
    for (i, m) in config.microgrids.iter().enumerate() {
        let d = m.demand_curve.demand(antibody.price, state.base_load[i]);
        demands.push(d);
        if m.storage.is_some() {
            let g = antibody.dispatch[i];
            dispatch.push(g);
            stored_next.push(storage_step(state.stored[i], g, d, state.res_output[i]));
        } else {
            dispatch.push(nonstorage_dispatch(d, state.res_output[i]));
        }
    }
    Flows {
        demands,
        dispatch,
        stored_next,
    }
}

/// Evaluates a decision into the four-entry minimization objective.
///
/// `k` selects the grid cost schedule entry. Fails only when the decision's
/// price drives some demand negative, which a validated configuration rules
/// out for prices inside the admissible interval.
pub fn evaluate<T: Scalar>(
    antibody: &Antibody<T>,
    state: &NetworkState<T>,
    config: &ScenarioConfig<T>,
    k: usize,
) -> Result<ObjectiveVector<T>, Error> {
    let f = flows(antibody, state, config);
    let omegas: Vec<T> = config.microgrids.iter().map(|m| m.omega).collect();
    let u_d = utility_microgrids(
        &f.demands,
        antibody.price,
        &omegas,
        config.alpha,
        config.utility_cap,
    )?;
    let total_dispatch = f.dispatch.iter().fold(T::zero(), |acc, &g| acc + g);
    let u_g = utility_grid(total_dispatch, antibody.price, config.grid_cost_at(k));
    let stored_total = f.stored_next.iter().fold(T::zero(), |acc, &s| acc + s);
    let penalty = constraint_penalty(state, &config.microgrids, &f.stored_next);
    Ok(ObjectiveVector([-u_d, -u_g, -stored_total, penalty]))
}

/// Decision box for one step: the price interval, then one dispatch interval
/// per storage microgrid wide enough to reach the rate limits at every
/// admissible demand level.
///
/// For a microgrid whose demand response is monotone over the price interval
/// the dispatch interval is
/// `[-rate + demand(p_max) - res, rate + demand(p_min) - res]`. A
/// non-monotone response falls back to the exact elasticity extrema over the
/// interval (and logs a warning, since such curves are unusual).
pub fn decision_bounds<T: Scalar>(
    state: &NetworkState<T>,
    config: &ScenarioConfig<T>,
) -> Bounds<T> {
    let (p_lo, p_hi) = config.price_bounds;
    let mut lower = vec![p_lo];
    let mut upper = vec![p_hi];
    for (i, m) in config.microgrids.iter().enumerate() {
        let Some(spec) = &m.storage else { continue };
        let (h_min, h_max) = if m.demand_curve.monotone_on(p_lo, p_hi) {
            (
                m.demand_curve.elasticity(p_hi),
                m.demand_curve.elasticity(p_lo),
            )
        } else {
            log::warn!(
                "microgrid {} demand response is not monotone on the price interval; \
                 widening dispatch bounds to its extrema",
                m.id
            );
            m.demand_curve.elasticity_extrema(p_lo, p_hi)
        };
        let b = state.base_load[i];
        let v = state.res_output[i];
        lower.push(-spec.rate_limit + (T::one() + h_min) * b - v);
        upper.push(spec.rate_limit + (T::one() + h_max) * b - v);
    }
    Bounds::new(lower, upper)
}

/// Always-feasible decision at the given price: every storage microgrid
/// exchanges exactly its demand net of renewables, freezing its stored level.
pub fn fallback_antibody<T: Scalar>(
    state: &NetworkState<T>,
    config: &ScenarioConfig<T>,
    price: T,
) -> Antibody<T> {
    let dispatch = config
        .microgrids
        .iter()
        .enumerate()
        .filter(|(_, m)| m.storage.is_some())
        .map(|(i, m)| {
            let d = m.demand_curve.demand(price, state.base_load[i]);
            nonstorage_dispatch(d, state.res_output[i])
        })
        .collect();
    Antibody { price, dispatch }
}

/// Shared test fixtures (compiled only for tests).
#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// One storage + one passive microgrid with friendly dyadic numbers.
    pub(crate) fn two_grid_config() -> ScenarioConfig<f64> {
        ScenarioConfig {
            microgrids: vec![
                MicrogridSpec {
                    id: 1,
                    omega: 2.0,
                    demand_curve: DemandCurve {
                        c2: 0.0,
                        c1: 0.0,
                        c0: 0.0,
                    },
                    storage: Some(StorageSpec {
                        cap_max: 250.0,
                        cap_secure: 125.0,
                        rate_limit: 25.0,
                        initial: Some(187.5),
                    }),
                },
                MicrogridSpec {
                    id: 2,
                    omega: 3.0,
                    demand_curve: DemandCurve {
                        c2: 0.0,
                        c1: 0.0,
                        c0: 0.0,
                    },
                    storage: None,
                },
            ],
            alpha: 0.015625, // keeps consumption below saturation at these demand levels
            utility_cap: CapMode::Continuous,
            grid_cost: vec![GridCostParams {
                a: 0.01,
                b: 0.1,
                c: 1.0,
            }],
            price_bounds: (1.5, 5.5),
            horizon: 1,
            base_load: vec![vec![100.0, 80.0]],
            res_output: vec![vec![100.0, 16.0]],
        }
    }
}
