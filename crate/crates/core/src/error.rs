use thiserror::Error;

/// Errors raised by the channel, scattering and metrics builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// A physical configuration violates one of its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An integrand produced a non-finite value.
    #[error("integrand returned a non-finite value at node x = {node}")]
    NonFinite { node: f64 },

    /// A matrix or vector argument has the wrong shape or structure.
    #[error("invalid input: {0}")]
    Input(String),

    /// Too many Monte Carlo trials failed numerically.
    #[error("{failed} of {trials} trials failed numerically")]
    TrialFailures { failed: usize, trials: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
