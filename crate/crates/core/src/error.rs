use thiserror::Error;

/// Errors raised by the engine. Each variant maps to a stable process exit
/// code and FFI status code through [`Error::code`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("conditioning error: {0}")]
    Conditioning(String),
    #[error("accuracy error: {message} (estimate {estimate:e}, tolerance {tolerance:e})")]
    Accuracy {
        message: String,
        estimate: f64,
        tolerance: f64,
    },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

/// Numeric error classes shared by the CLI exit status and the C ABI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ErrorCode {
    Success = 0,
    Usage = 2,
    Domain = 3,
    Accuracy = 4,
    Capacity = 5,
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Argument(_) => ErrorCode::Usage,
            Error::Domain(_) | Error::Conditioning(_) => ErrorCode::Domain,
            Error::Accuracy { .. } => ErrorCode::Accuracy,
            Error::Capacity(_) => ErrorCode::Capacity,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Domain(_) => "domain",
            Error::Conditioning(_) => "conditioning",
            Error::Accuracy { .. } => "accuracy",
            Error::Capacity(_) => "capacity",
        }
    }

    pub(crate) fn accuracy(message: impl Into<String>, estimate: f64, tolerance: f64) -> Self {
        Error::Accuracy {
            message: message.into(),
            estimate,
            tolerance,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
