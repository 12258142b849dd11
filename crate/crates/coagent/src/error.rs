//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller passed an argument that violates a precondition
    /// (wrong length, index out of range, value outside its domain).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constructed object failed its structural checks
    /// (probabilities not summing to one, cyclic wiring, sharing gaps, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A config file could not be parsed or contains bad values.
    #[error("config error: {0}")]
    Config(String),

    /// Exhaustive enumeration grew past the configured node budget.
    #[error("enumeration budget exceeded: {nodes} nodes visited (budget {budget})")]
    BudgetExceeded { nodes: u64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
