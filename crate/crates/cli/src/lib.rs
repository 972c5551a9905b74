//! Command-line front end and the acceptance battery.

pub mod commands;
pub mod config;
pub mod suite;

pub use commands::{run, Cli, Command, Report, UsageError};
