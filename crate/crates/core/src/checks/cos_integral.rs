use super::CheckReport;
use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::quad::cos_over_u;
use crate::stats::NeumaierSum;

/// `Σ_{y<p≤z} cos(t log p)/p`.
pub fn cos_prime_sum(y: f64, z: f64, t: f64, table: &PrimeTable) -> Result<f64> {
    table.check_covers(z, "upper cutoff")?;
    let acc: NeumaierSum = table.primes_in(y, z).iter().map(|&p| (t * (p as f64).ln()).cos() / p as f64).collect();
    Ok(acc.total())
}

/// `∫_{t log y}^{t log z} cos(u)/u du`, or `log(log z/log y)` at `t = 0`.
pub fn cos_integral_proxy(y: f64, z: f64, t: f64) -> f64 {
    if y == z {
        0.0
    } else if t == 0.0 {
        (z.ln() / y.ln()).ln()
    } else {
        cos_over_u(t * y.ln(), t * z.ln())
    }
}

/// Prime sum against its integral proxy; passes when `abs_err ≤ tol`.
pub fn cos_integral_check(y: f64, z: f64, t: f64, tol: f64, table: &PrimeTable) -> Result<CheckReport> {
    if !(y >= 2.0 && y <= z) {
        return Err(Error::Domain(format!("need 2 <= y <= z, got ({y}, {z}]")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("need t >= 0, got {t}")));
    }
    Ok(CheckReport::absolute(cos_prime_sum(y, z, t, table)?, cos_integral_proxy(y, z, t), tol))
}
