//! Command-line front end: structure files in, TOML reports out.
//!
//! Exit status is 0 when every check passes, 1 when a mathematical check
//! fails and 2 for usage, input and parse errors.

pub mod args;
pub mod commands;
pub mod format;
pub mod operands;
pub mod report;

pub use args::Cli;
pub use commands::{run, CliError};
pub use report::Report;
