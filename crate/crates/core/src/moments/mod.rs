//! Monte Carlo estimators for pseudomoments and for moments of integrals
//! of random Euler products, with the exact formulas they are checked against.

mod exact;
mod integral;
mod pseudo;
mod two_point;

pub use exact::{exact_integer_moment, MAX_INTEGER_MOMENT};
pub use integral::{
    euler_integral_moment_mc, log_integrals, moment_from_log_integrals, IntegralMomentConfig, DEFAULT_GRID_DENSITY,
};
pub use pseudo::{
    estimator_for, pseudomoment_mc, pseudomoment_mc_multi, pseudomoment_squares, PseudomomentConfig,
};
pub use two_point::{
    two_point_method, two_point_moment_exact, two_point_moment_mc, two_point_sums_sieved, TwoPointExact,
    TwoPointSums, ENVELOPE_CONSTANT,
};
