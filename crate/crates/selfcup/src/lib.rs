//! Command-line front end for `selfcup-core`: parallel verification runs,
//! JSON reports and module description files.

pub mod commands;
pub mod error;
pub mod module_file;
pub mod runner;

pub use error::{CliError, CliResult};
