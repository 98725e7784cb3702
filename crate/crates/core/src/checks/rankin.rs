use super::CheckReport;
use crate::arith::{for_each_composed, prime_power_coefficient, PrimeTable};
use crate::error::{Error, Result};
use crate::stats::NeumaierSum;

/// Largest enumeration horizon accepted by [`rankin_tail_check`].
pub const MAX_RANKIN_HORIZON: f64 = 1e12;

/// Inputs of the tail comparison for `y`-smooth integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankinParams {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub c: f64,
    pub horizon: f64,
}

/// `x^{−C/log y} ∏_{p≤y} (1 − p^{−1+C/log y})^{−α²}`.
pub fn rankin_bound(x: f64, y: f64, alpha: f64, c: f64, table: &PrimeTable) -> Result<f64> {
    let eps = c / y.ln();
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("need 0 < C/log y < 1, got C = {c}, y = {y}")));
    }
    table.check_covers(y, "smoothness level")?;
    let log_euler: f64 = table.primes_in(1.0, y).iter().map(|&p| -(-(p as f64).powf(eps - 1.0)).ln_1p()).sum();
    Ok((-eps * x.ln() + alpha * alpha * log_euler).exp())
}

/// Compares `Σ_{x<n≤H, P(n)≤y} d_α(n)²/n`, enumerated exactly, with
/// [`rankin_bound`]. The part of the sum beyond `H` is itself bounded by
/// `rankin_bound` at `H`; the check passes when the enumerated sum plus
/// that allowance stays below the bound at `x`.
pub fn rankin_tail_check(params: &RankinParams, table: &PrimeTable) -> Result<CheckReport> {
    let RankinParams { x, y, alpha, c, horizon } = *params;
    if !(horizon <= MAX_RANKIN_HORIZON) {
        return Err(Error::Config(format!("horizon {horizon} exceeds {MAX_RANKIN_HORIZON}")));
    }
    if !(x >= 1.0 && y >= 2.0 && alpha >= 1.0) {
        return Err(Error::Domain(format!("need x >= 1, y >= 2, alpha >= 1, got {params:?}")));
    }
    let rhs = rankin_bound(x, y, alpha, c, table)?;
    if x >= horizon {
        return Ok(CheckReport::new(0.0, rhs, true));
    }
    let primes = table.primes_in(1.0, y);
    let recip: Vec<f64> = primes.iter().map(|&p| 1.0 / p as f64).collect();
    let mut lhs = NeumaierSum::new();
    for_each_composed(
        primes,
        horizon.floor() as u64,
        |i, e| {
            let d = prime_power_coefficient(alpha, e);
            d * d * recip[i].powi(e as i32)
        },
        |n, w, _| {
            if n as f64 > x {
                lhs.add(w);
            }
        },
    );
    let lhs = lhs.total();
    let beyond = rankin_bound(horizon, y, alpha, c, table)?;
    Ok(CheckReport::new(lhs, rhs, lhs + beyond <= rhs))
}
