use thiserror::Error;

/// Errors produced by protocol construction, parameter selection and
/// verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid privacy budget: eps={eps}, delta={delta} (need eps > 0 and 0 < delta < 1)")]
    InvalidBudget { eps: f64, delta: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("length mismatch: expected {expected} messages, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("randomizer and analyzer disagree on parameters: {0}")]
    ParameterMismatch(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("outside validity range: {0}")]
    OutOfRange(String),

    #[error("exact check guard exceeded: n={n} > limit {limit}")]
    GuardExceeded { n: usize, limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
