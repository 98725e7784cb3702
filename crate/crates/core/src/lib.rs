//! Numerical experiments on pseudomoments of partial sums of powers of the
//! Riemann zeta function, modelled by Steinhaus random multiplicative
//! functions and random Euler products.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod checks;
pub mod error;
pub mod moments;
pub mod parallel;
pub mod quad;
pub mod random;
pub mod stats;
pub mod surrogate;

pub use error::{Error, Result};
