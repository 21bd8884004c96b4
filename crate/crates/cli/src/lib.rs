//! Command-line front end for `udn-core`: parameter sweeps written as CSV
//! and SVG, pinned figure grids, and Monte Carlo adjudication of convention
//! choices.

// `!(x > 0.0)` is how NaN is rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjudicate;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod sweep;

pub use error::{CliError, Result};
