use thiserror::Error;

/// Failure modes shared by every module. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular hyperplane section: discriminant vanishes")]
    SingularSection,
    #[error("linear form vanishes modulo {0}; use the hypersurface count instead")]
    SectionDegenerates(u64),
    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("inconsistent data: {0}")]
    DataInconsistent(String),
    #[error("data unavailable: {0}")]
    DataUnavailable(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 3,
            Error::NumericalFailure(_) => 4,
            _ => 2,
        }
    }
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
