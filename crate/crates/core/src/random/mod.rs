//! Steinhaus random multiplicative functions and random Euler products.

mod euler;
mod seed;
mod steinhaus;

pub use euler::{euler_log, euler_product, split_spec, EulerProductSpec, EulerWindow, LOWER_CUTOFF};
pub use seed::Seed;
pub use steinhaus::{
    extend_multiplicative, partial_sum, sample_steinhaus, DivisorPolynomial, MultiplicativeValues, SteinhausSample,
    MAX_EXTEND,
};
