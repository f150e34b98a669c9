use thiserror::Error;

/// Errors reported by the Casimir library.
#[derive(Debug, Error)]
pub enum CasimirError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{quantity} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("permittivity table, line {line}: {message}")]
    Table { line: usize, message: String },

    #[error("model has no zero-frequency rule; the n = 0 Matsubara term cannot be evaluated")]
    NoZeroFrequencyRule,

    #[error("matrix factorization failed: {0}")]
    Factorization(String),

    #[error("decimation blocks too large: 1 - A A^T is not positive definite for m = {m}")]
    NotPositiveDefinite { m: usize },

    #[error("non-finite matrix element at m = {m}, row {row}, column {col}")]
    NonFinite { m: usize, row: usize, col: usize },

    #[error("inconsistent geometry: {0}")]
    Geometry(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CasimirError>;
