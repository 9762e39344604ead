use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structured input (population, grid, simulation setup) is inconsistent.
    #[error("validation error: {0}")]
    Validation(String),

    /// A derived configuration value is unusable and must be supplied explicitly.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine failed to reach its tolerance.
    #[error("numerical error: {message} (partial estimate {partial}, error estimate {error_estimate})")]
    Numerical {
        message: String,
        partial: f64,
        error_estimate: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
