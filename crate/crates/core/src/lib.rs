//! Moment spaces of matrix measures on `[0, 1]`.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::too_many_arguments
)]

pub mod canonical;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod moment_space;
pub mod parallel;

pub use error::{Error, Result};
