//! Two-sided numerical checks of deterministic identities and bounds:
//! Plancherel for Dirichlet polynomials, short-interval sums over integers
//! with restricted prime factors, Rankin-type tails of smooth numbers, and
//! the prime sum `Σ cos(t log p)/p`.
//!
//! The bound checks report ratios or one-sided comparisons; their implied
//! constants are calibrated empirically, not proved.

mod cos_integral;
mod ntr1;
mod plancherel;
mod rankin;
mod report;

pub use cos_integral::{cos_integral_check, cos_integral_proxy, cos_prime_sum};
pub use ntr1::{admissible_ntr1_tuples, ntr1_ratio, Ntr1Params, MAX_NTR1_V};
pub use plancherel::plancherel_check;
pub use rankin::{rankin_bound, rankin_tail_check, RankinParams, MAX_RANKIN_HORIZON};
pub use report::CheckReport;
