use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    Domain(String),
    /// Malformed arguments (odd mesh size, mismatched lengths, ...).
    Argument(String),
    /// A problem definition violates one of its structural assumptions.
    InvalidProblem(String),
    /// Breakdown inside a numerical kernel.
    Numeric(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidProblem(msg) => write!(f, "invalid problem: {msg}"),
            Error::Numeric(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
