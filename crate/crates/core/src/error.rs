use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid arity: {0}")]
    Arity(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid pair set: {0}")]
    PairSet(String),

    #[error("operator is not Hermitian within tolerance: {0}")]
    Hermiticity(String),

    #[error("state is not normalized: {0}")]
    Normalization(String),

    #[error("negative quantity where a nonnegative one is required: {0}")]
    Positivity(String),

    #[error("inputs do not match the requested mode: {0}")]
    Mode(String),

    #[error("operation requires a pure state: {0}")]
    Purity(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("truncation tail too large: {0}")]
    Truncation(String),

    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
