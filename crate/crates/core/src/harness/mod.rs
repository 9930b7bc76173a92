//! The `fqnm-lab` experiment runner: configuration, experiments and output.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_config, parse_config_str, ConfigError, Experiment, ExperimentConfig};
pub use experiments::{run_experiment, RunSummary};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("{experiment}: {source}")]
    Runtime {
        experiment: Experiment,
        #[source]
        source: crate::Error,
    },

    #[error("{experiment}: invariant breach: {message}")]
    Invariant { experiment: Experiment, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// 1 for configuration problems, 2 for anything that went wrong while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            _ => 2,
        }
    }
}
