//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidInput(String),
    /// An oracle read fell outside the codeword.
    RangeError {
        l: usize,
        r: usize,
        len: usize,
    },
    /// A decoder could not produce an answer for the requested interval.
    DecodeFailure(String),
    /// A parameter set failed validation; all violations are listed.
    InvalidParams(Vec<String>),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::RangeError { l, r, len } => {
                write!(f, "range [{l},{r}] out of bounds for length {len}")
            }
            Error::DecodeFailure(msg) => write!(f, "decode failure: {msg}"),
            Error::InvalidParams(violations) => {
                write!(f, "invalid parameters: {}", violations.join("; "))
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
