//! Experiment runner: the double-well precision table, Ising β sweeps, the
//! cross-module validation suite and CSV plot data.
//!
//! Every command reads an optional INI config (see [`config`]) whose keys
//! match the long CLI flags; flags override the file.

pub mod checks;
pub mod config;
mod error;
pub mod experiments;
pub mod output;
pub mod report;
pub mod validate;

pub use config::{Command, ExperimentConfig, Settings};
pub use error::{CliError, Result};
