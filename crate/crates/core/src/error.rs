use thiserror::Error;

/// Errors raised by the numeric layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision setting: {0}")]
    Precision(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },
    #[error("{what} did not converge (last estimate {last}, previous {previous})")]
    Convergence {
        what: String,
        last: String,
        previous: String,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
