//! Errors of the command-line front end.

use std::path::PathBuf;

use thiserror::Error;

/// Anything that stops a command before it produces a report.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values, suite names or operator descriptors.
    #[error("{0}")]
    Usage(String),
    /// The config file could not be read.
    #[error("cannot read config file {path}: {source}")]
    ConfigRead {
        /// Config file path.
        path: PathBuf,
        /// Underlying I/O error.
        source: std::io::Error,
    },
    /// The config file is not valid TOML or has unknown keys.
    #[error("invalid config file {path}: {source}")]
    ConfigParse {
        /// Config file path.
        path: PathBuf,
        /// Underlying parse error.
        source: toml::de::Error,
    },
    /// The report could not be written.
    #[error("cannot write {path}: {source}")]
    Write {
        /// Output path.
        path: PathBuf,
        /// Underlying I/O error.
        source: std::io::Error,
    },
    /// A library call rejected its input.
    #[error(transparent)]
    Core(#[from] gdirac_core::Error),
    /// JSON encoding failed.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// CSV encoding failed.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status: every error is a usage or configuration error.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
