use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called outside its domain (zero gcd, missing variable, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The input violates a standing geometric hypothesis (isotrivial model,
    /// cuspidal fiber, non-coprime generators, ...).
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An identity that must hold failed on a concrete instance.
    #[error("internal falsification: {0}")]
    Falsification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    /// Stable name used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse(_) | Error::Json(_) => "malformed_input",
            Error::Io(_) => "io",
            Error::Hypothesis(_) => "hypothesis_violation",
            Error::Unsupported(_) => "unsupported",
            Error::Falsification(_) => "falsification",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse(_) | Error::Json(_) | Error::Io(_) => 1,
            Error::Hypothesis(_) | Error::Unsupported(_) => 2,
            Error::Falsification(_) => 3,
        }
    }
}
