use thiserror::Error;

/// Errors raised by the displacement engine and the concrete geometries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("geometry mismatch: expected {expected}, found {found}")]
    GeometryMismatch { expected: String, found: String },

    #[error("word budget exceeded: {needed} products requested but the budget is {budget}")]
    Budget { needed: u128, budget: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("search radius {radius} too small: the objective still decreases at the boundary, retry with a larger radius")]
    RadiusTooSmall { radius: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("no admissible seed found after {attempts} attempts starting at seed {first_seed}")]
    RetryExhausted { first_seed: u64, attempts: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
