use thiserror::Error;

/// Crate-wide error type.
///
/// The two variants map onto the CLI exit codes: parameter errors exit with
/// code 1, numerical failures with code 2. A scientifically expected
/// divergence verdict is a *value*, never an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
