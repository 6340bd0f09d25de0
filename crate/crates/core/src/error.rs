//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched dimensions between two inputs (state vs circuit, bit
    /// vector vs qubit count, ...).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A qubit index referenced something outside the register.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// An argument violated a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structural constraint was violated (e.g. an ansatz that is not
    /// single-axis was handed to the reduced estimator).
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// The request would exceed a hard resource limit.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A document failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
