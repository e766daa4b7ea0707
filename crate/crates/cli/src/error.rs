use std::fmt;
use std::process::ExitCode;

use mackey_core::io::IoError;
use mackey_core::mackey::MackeyError;
use mackey_core::{GroupError, TransferError};

/// Failures, by exit code: 1 verification mismatch, 2 bad input,
/// 3 a theory precondition that does not hold.
#[derive(Debug)]
pub enum CliError {
    Mismatch(String),
    Input(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Mismatch(_) => 1,
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Mismatch(s) => write!(f, "verification failed: {s}"),
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Precondition(s) => write!(f, "precondition violated: {s}"),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Mackey(m) => m.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<MackeyError> for CliError {
    fn from(e: MackeyError) -> Self {
        match e {
            MackeyError::InadmissibleAction { .. } | MackeyError::NotClassFunctor(_) => {
                CliError::Precondition(e.to_string())
            }
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TransferError> for CliError {
    fn from(e: TransferError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
