//! Experiment harness for `repeatprune`: configuration, multi-trial Monte
//! Carlo runs with CSV/JSON output, closed-form bound tables and randomized
//! brute-force verification.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod verify;

pub use config::{DomainConfig, ExperimentConfig, GraphSource, LpSource, SearchSource};
pub use error::{CliError, CliResult};
pub use experiment::{run_experiment, run_experiment_with_workers, ExperimentOutput, ExperimentSummary, TrialResult};
