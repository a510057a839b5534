//! Command-line front end for `wsubreg`: run configuration, subcommands and
//! the verification pipeline against bundled reference data.

pub mod commands;
pub mod config;
pub mod verify;

pub use config::{CliError, CliResult, Format, RunConfig};
