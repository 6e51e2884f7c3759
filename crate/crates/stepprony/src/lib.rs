//! File formats and command implementations behind the `stepprony` binary.
//!
//! Every output starts with the [`RunConfig`] that produced it: CSV files as a
//! `# config {json}` comment line, JSON files as a top-level `"config"` key.

// `!(e < tol)` counts NaN errors as failures.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;

pub use config::RunConfig;
pub use error::{CliError, Outcome};
