use std::process::ExitCode;

use thiserror::Error;

/// Hard failures: bad arguments, unreadable or malformed input.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] stepprony_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(2)
    }
}

/// How a command that ran to completion judged its result.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Success,
    /// The output was written but fails the quality threshold.
    QualityBreach(String),
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::QualityBreach(_) => ExitCode::from(3),
        }
    }
}
