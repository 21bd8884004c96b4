//! Coverage probability and area spectral efficiency of dense directional
//! cellular networks under dual-slope path loss.

// `!(x > 0.0)` is how NaN is rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod analytic;
pub mod asymptotics;
pub mod model;
pub mod montecarlo;
pub mod special;

pub use error::{Error, Result};
