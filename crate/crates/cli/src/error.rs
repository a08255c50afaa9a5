use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the CLI, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{0}")]
    SearchExhausted(String),

    #[error("comparison failed: {0}")]
    Pairing(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scenario(_) => 3,
            CliError::SearchExhausted(_) => 4,
            CliError::Pairing(_) => 5,
            CliError::Io { .. } => 6,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<wsn_core::Error> for CliError {
    fn from(e: wsn_core::Error) -> Self {
        use wsn_core::Error as E;
        match e {
            E::InvalidRegion { .. } | E::InvalidScenario(_) => CliError::Scenario(e.to_string()),
            E::SearchExhausted { .. } => CliError::SearchExhausted(e.to_string()),
            E::UndefinedTest(_) | E::LengthMismatch(..) => CliError::Pairing(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
