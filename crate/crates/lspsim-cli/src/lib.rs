//! Scenario layer on top of the `lspsim` core: TOML configs, presets,
//! deterministic CSV/manifest output, and Rabi-splitting extraction.

pub mod config;
pub mod error;
pub mod output;
pub mod rabi;

pub use config::Scenario;
pub use error::{CliError, Result};
