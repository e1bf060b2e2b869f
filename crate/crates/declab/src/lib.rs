//! Config-driven experiments over `declab-core`.
//!
//! A config names one experiment and its parameters; `declab run` turns it
//! into a CSV table and, with `--check`, evaluates the experiment's
//! acceptance checks.

pub mod config;
pub mod experiments;
pub mod runner;

use thiserror::Error;

pub use config::{parse_config, parse_config_str, ConfigError, ExperimentConfig};
pub use experiments::{Check, Experiment};
pub use runner::{execute, run_config, validate, write_atomic, RunOptions, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("run failed: {0}")]
    Run(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// 2 for bad configs, 3 for runtime or I/O failures, 4 for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) | CliError::Io(_) => 3,
            CliError::ChecksFailed(_) => 4,
        }
    }
}
