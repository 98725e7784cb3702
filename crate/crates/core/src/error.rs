use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the range an operation supports (caps, sizes, resolutions).
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument is outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented hypothesis of an identity or bound does not hold for the given inputs.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The requested scale `T` belongs to a different range of the dyadic decomposition.
    #[error("regime error: {0}")]
    Regime(String),

    /// A numerical procedure could not complete (e.g. a covariance matrix is not PSD).
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
