use std::fmt;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl fmt::Display) -> Self {
        Error::Parameter(msg.to_string())
    }

    pub fn parse(line: usize, msg: impl fmt::Display) -> Self {
        Error::Parse { line, msg: msg.to_string() }
    }

    pub fn invariant(msg: impl fmt::Display) -> Self {
        Error::Invariant(msg.to_string())
    }
}
