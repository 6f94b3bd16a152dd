use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested accuracy could not be certified.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A linear-algebra kernel failed (singular system, no convergence).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Too few usable points for a least-squares fit.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    /// Invalid experiment configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
