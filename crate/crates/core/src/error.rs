use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("convergence failure in {context}: estimate {estimate:e}, error bound {error_bound:e}")]
    ConvergenceFailure {
        context: String,
        estimate: f64,
        error_bound: f64,
    },

    #[error("method not supported: {0}")]
    UnsupportedMethod(String),

    #[error("insufficient terms: {0}")]
    InsufficientTerms(String),

    #[error("singular linear system in {0}")]
    SingularSystem(String),

    #[error("continuation failed at xi = {xi}: {reason}")]
    ContinuationFailure { xi: f64, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn convergence(context: impl Into<String>, estimate: f64, error_bound: f64) -> Self {
        Error::ConvergenceFailure {
            context: context.into(),
            estimate,
            error_bound,
        }
    }

    /// True for errors caused by bad input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidParameter(_)
                | Error::UnsupportedMethod(_)
                | Error::InsufficientTerms(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
