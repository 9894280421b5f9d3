use thiserror::Error;

/// Errors raised by graph validation, the expansion engine, the weight
/// functions and the exact oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("condition not satisfied: {0}")]
    Condition(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("epsilon must lie in (0, 1], got {0}")]
    Epsilon(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
