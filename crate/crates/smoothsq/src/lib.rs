//! Experiment driver for the `smoothsq-core` numerics: configuration,
//! deterministic parallel Monte Carlo, CSV/JSON artifacts with a hashed
//! manifest, and the subcommands behind the `smoothsq` binary.

pub mod artifacts;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod lpformat;
pub mod parallel;

pub use commands::{execute, Command};
pub use config::Config;
pub use error::CliError;
