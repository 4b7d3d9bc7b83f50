// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;

pub use error::{Error, Result};
pub mod branch;
pub mod cli;
pub mod config;
pub mod groundstate;
pub mod kirchhoff;
pub mod report;
pub mod shooting;
pub mod verify;
