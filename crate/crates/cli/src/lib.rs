//! Parameter sweeps, figure presets and the verification runner behind the
//! `schwinger` binary.

pub mod config;
pub mod output;
pub mod presets;
pub mod sampling;
pub mod sweep;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown preset {0:?}; expected one of fig1..fig10")]
    UnknownPreset(String),
    #[error("bad value for {key}: {message}")]
    BadValue { key: String, message: String },
    #[error("malformed input at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] schwinger_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) => core_exit_code(e),
            Self::Io(_) => 1,
            _ => 2,
        }
    }
}

/// 2 when the parameters themselves are unusable, 3 when a computation on
/// valid parameters failed.
pub fn core_exit_code(e: &schwinger_core::Error) -> i32 {
    use schwinger_core::Error::*;
    match e {
        InvalidMode { .. } | InvalidField { .. } | NotSauter | DegenerateMode(_) | InvalidConfig(_) => 2,
        _ => 3,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
