//! Command-line front end: JSON experiment configs, CSV result tables,
//! SVG deployment plots and the subcommands that tie them together.

pub mod commands;
pub mod config;
pub mod error;
pub mod records;
pub mod svg;

pub use commands::GlobalOptions;
pub use error::{CliError, CliResult};
