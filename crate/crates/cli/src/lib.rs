//! Library side of the `majorana-readout` command-line tool.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod model;
pub mod output;
pub mod reproduce;
pub mod svg;
pub mod sweep;

pub use error::{CliError, CliResult};
