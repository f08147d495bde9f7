//! Command-line front end of `ypfa-core`: figure sweeps, oracle verification
//! and exclusion limits, written as CSV with a JSON run manifest.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

pub use error::{CliError, Result};
