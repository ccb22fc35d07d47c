//! Design engine for networked microgrids that trade energy through a shared
//! distribution grid under a single market price.
//!
//! At every hour a coordinator picks one decision vector: the energy price
//! plus a grid-exchange dispatch for each storage-equipped microgrid.
//! Non-storage microgrids have no freedom — their exchange is fixed by their
//! (price-elastic) demand net of renewable output. The coordinator weighs
//! four competing measures at once: aggregate microgrid benefit, grid
//! operator profit, total energy left in storage, and a penalty that is zero
//! exactly when every storage unit respects its ramp and capacity limits.
//!
//! The crate is organised as a pipeline:
//!
//! * [`model`] — network state, demand curves, utilities, the four-entry
//!   objective vector, and per-step decision bounds;
//! * [`moia`] — an immune-inspired multiobjective search that evolves a
//!   population of candidate decisions into a nondominated archive and picks
//!   a balanced ("knee") compromise from it;
//! * [`sim`] — the closed-loop hourly simulator tying the two together;
//! * [`oracle`] — an independent exhaustive-grid reference front used to
//!   cross-check the solver and the penalty formulation;
//! * [`scenario`] — the TOML scenario schema, validation, and synthetic
//!   load/renewable profile generation;
//! * [`trace_io`] — stable text renderings of simulation outputs.
//!
//! All numeric code is generic over [`Scalar`] (implemented for `f32` and
//! `f64`); the [`type@Antibody64`]-style aliases below fix the common
//! double-precision instantiations. Every random draw in the crate flows
//! through an explicitly seeded ChaCha8 stream, so identical inputs yield
//! bit-identical outputs on every platform.

pub mod bounds;
pub mod error;
pub mod model;
pub mod moia;
pub mod oracle;
pub mod scalar;
pub mod scenario;
pub mod sim;
pub mod trace_io;

pub use bounds::Bounds;
pub use error::Error;
pub use scalar::Scalar;

/// Double-precision decision vector (price + storage dispatches).
pub type Antibody64 = model::Antibody<f64>;
/// Double-precision objective vector.
pub type ObjectiveVector64 = model::ObjectiveVector<f64>;
/// Double-precision network snapshot.
pub type NetworkState64 = model::NetworkState<f64>;
/// Double-precision scenario configuration.
pub type ScenarioConfig64 = model::ScenarioConfig<f64>;
/// Double-precision loaded scenario (configuration plus solver sizing).
pub type Scenario64 = scenario::Scenario<f64>;
/// Double-precision decision-space box.
pub type Bounds64 = Bounds<f64>;
/// Double-precision nondominated archive.
pub type ParetoArchive64 = moia::ParetoArchive<f64>;
/// Double-precision simulation trace.
pub type SimulationTrace64 = sim::SimulationTrace<f64>;
