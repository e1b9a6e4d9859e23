use std::fmt;
use std::process::ExitCode;

use hqc_core::Error;

/// Failures that end a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable config, inconsistent parameters (exit 2).
    Usage(String),
    /// Numerical or I/O failure while computing or writing (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InconsistentParams(_)
            | Error::InvalidPlacement(_)
            | Error::QubitIndexOutOfRange { .. }
            | Error::TooManyQubits { .. }
            | Error::UnsupportedEncodingSize(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
