use std::fmt;

use unit_twist_core::Error;

/// Exit codes: 1 usage or input error, 2 precision exhausted, 3 a certified
/// violation of a proven inequality.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Exhausted(String),
    Violation(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn violation(msg: impl Into<String>) -> Self {
        CliError::Violation(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Exhausted(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Exhausted(m) => write!(f, "precision exhausted: {m}"),
            CliError::Violation(m) => write!(f, "certified violation: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted { .. } => CliError::Exhausted(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
