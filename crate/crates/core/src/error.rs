use std::fmt;

/// Errors shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("budget exceeded: {what} (limit {limit}, reached {reached})")]
    Budget {
        what: &'static str,
        limit: usize,
        reached: usize,
    },
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl fmt::Display) -> Self {
        Error::Invalid(msg.to_string())
    }

    pub fn format(line: usize, msg: impl fmt::Display) -> Self {
        Error::Format {
            line,
            msg: msg.to_string(),
        }
    }
}
