#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cocycle;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod induction;
pub mod linalg;
pub mod maps;
pub mod quadrature;
pub mod scalar;
pub mod tuning;

pub use error::{Error, Result};
