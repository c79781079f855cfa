use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `x < 0`).
    #[error("domain error: {0}")]
    Domain(String),
    /// Distribution or configuration parameters violate their invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An intermediate quantity exceeded the representable `f64` range.
    #[error("overflow: {0}")]
    Overflow(String),
    /// The optimizer hit its iteration cap without meeting the tolerance.
    #[error("convergence failure after {iterations} iterations (relative spread {spread:e})")]
    Convergence { iterations: usize, spread: f64 },
    /// All observations are identical; the likelihood has no interior maximum.
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("empty data")]
    EmptyData,
    /// Not enough input terms for the requested output length.
    #[error("length error: need {needed}, got {got}")]
    Length { needed: usize, got: usize },
    /// Malformed sample or parameter file.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
