use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs do not fit the field or group they are used with.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The operation is undefined for the given value (0^0, inverse of 0, root of a non-residue).
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Requested parameters violate the configured policy.
    #[error("policy error: {0}")]
    Policy(String),

    /// Malformed encoding or file contents.
    #[error("format error: {0}")]
    Format(String),

    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("environment error: {0}")]
    Environment(String),

    /// An honest run failed to verify during benchmarking.
    #[error("completeness failure: {0}")]
    Completeness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
