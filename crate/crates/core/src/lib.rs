#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod basis;
pub mod cli;
pub mod czcheck;
pub mod error;
pub mod gfunctions;
pub mod kernels;
pub mod measure;
pub mod specfun;

pub use error::{Error, Result};
