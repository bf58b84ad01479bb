//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is out of its allowed range.
    #[error("invalid parameter {name}: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },

    /// A Gaussian state violates the physicality condition det(cov) >= 1/4
    /// or has a non-positive quadrature variance.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Config-file syntax or content problem; carries the offending key.
    #[error("parse error in field `{field}`: {reason}")]
    Parse { field: String, reason: String },

    /// Semantic validation of an otherwise well-formed input failed.
    #[error("validation error: {0}")]
    Validation(String),

    /// An iterative numeric routine failed to converge or lost precision.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Fock-space cutoff too small for the requested state.
    #[error("truncation error: trace deficit {deficit:.3e} exceeds tolerance; retry with dim >= {suggested_dim}")]
    Truncation { deficit: f64, suggested_dim: usize },

    /// Quantum Fisher information is zero; no finite precision bound exists.
    #[error("no information: {0}")]
    NoInformation(String),

    /// A search range does not bracket an interior optimum.
    #[error("range error: {0}")]
    Range(String),

    /// The measured observable does not respond to the parameter.
    #[error("insensitive observable: {0}")]
    Insensitive(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
