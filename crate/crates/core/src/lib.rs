//! Semi-distance confidence intervals and hypothesis tests for normal data.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distributions;
pub mod error;
pub mod framework;
pub mod inference;
pub mod measurement;
pub mod montecarlo;
pub mod roots;

pub use error::{Error, Result};
