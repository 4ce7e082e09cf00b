//! Error type shared by every stage of the pipeline.

use std::fmt;

/// Errors produced by the descriptor pipeline.
#[derive(Debug)]
pub enum Error {
    /// A caller violated an operation's precondition (wrong color space,
    /// non-normalized kernel, out-of-range fold count, ...).
    Contract(String),
    /// Input data cannot be used: empty corpus, stale feature cache,
    /// undecodable class layout.
    Data(String),
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Data(msg) => write!(f, "data error: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
