use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("no endemic equilibrium: R0 = {r0} does not exceed 1")]
    NoEndemicEquilibrium { r0: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("non-finite state at t = {time}")]
    NonFiniteState { time: f64 },

    #[error("invalid integration config: {0}")]
    InvalidConfig(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
