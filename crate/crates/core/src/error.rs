use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented invariant.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Input that makes the requested computation meaningless.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A target pose fell outside the configured workspace box.
    #[error("pose outside workspace: {0}")]
    OutOfWorkspace(String),

    /// An internal invariant that callers cannot trigger through valid
    /// inputs was violated.
    #[error("internal consistency violation: {0}")]
    Inconsistency(String),

    /// Malformed image or config data.
    #[error("decode error: {0}")]
    Decode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
