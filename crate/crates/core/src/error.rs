//! Crate-wide error type.

/// Errors surfaced by scenario validation, evaluation, and the solver/oracle
/// entry points.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Scenario file or in-memory configuration violates a documented
    /// constraint (dimensions, orderings, positivity, ...).
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A demand curve produced a negative consumption level, for which the
    /// consumer benefit function is undefined.
    #[error("negative demand {demand} for microgrid {index}")]
    NegativeDemand { index: usize, demand: f64 },

    /// Solver parameters are inconsistent (population sizes, iteration count).
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),

    /// A compromise decision was requested from an archive with no entries.
    #[error("empty archive: no feasible nondominated designs")]
    EmptyArchive,

    /// The requested exhaustive grid is larger than the configured budget.
    #[error("grid of {points} points exceeds evaluation budget {budget}")]
    BudgetExceeded { points: usize, budget: usize },

    /// Scenario file could not be read.
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),

    /// Scenario file is not valid TOML for the documented schema.
    #[error("cannot parse scenario: {0}")]
    Parse(#[from] toml::de::Error),
}
