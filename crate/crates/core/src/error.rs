use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An input sample lies outside the domain of a formula (e.g. a zero cell).
    #[error("domain error: {0}")]
    Domain(String),
    /// The call itself is malformed (e.g. an empty list).
    #[error("usage error: {0}")]
    Usage(String),
    /// A root bracket could not be established.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Adaptive quadrature ran out of its subdivision budget.
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
