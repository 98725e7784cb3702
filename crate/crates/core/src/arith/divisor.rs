use super::sieve::{factorize, PrimeTable};
use crate::error::{Error, Result};

/// `d_α(p^j) = α(α+1)···(α+j−1)/j!`, the coefficient of `p^{-js}` in `(1 − p^{-s})^{-α}`.
pub fn prime_power_coefficient(alpha: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (alpha + i as f64) / (i + 1) as f64)
}

/// Generalised divisor function `d_α(n)`, multiplicative in `n`.
pub fn divisor_alpha(n: u64, alpha: f64, table: &PrimeTable) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("d_alpha(0) is undefined".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    let f = factorize(n, table)?;
    Ok(f.pairs().iter().map(|&(_, e)| prime_power_coefficient(alpha, e)).product())
}

/// `d_α(n)` for every `0 ≤ n ≤ x` (index 0 holds 0.0), built from the spf array.
pub fn divisor_alpha_table(x: u64, alpha: f64, table: &PrimeTable) -> Result<Vec<f64>> {
    if x > table.spf_limit() {
        return Err(Error::Config(format!(
            "d_alpha table up to {x} needs smallest prime factors up to {x}, have {}",
            table.spf_limit()
        )));
    }
    let x = x as usize;
    let mut d = vec![0.0; x + 1];
    if x >= 1 {
        d[1] = 1.0;
    }
    for n in 2..=x {
        let p = table.spf(n as u64).expect("within spf range") as usize;
        let mut m = n / p;
        let mut e = 1;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        d[n] = d[m] * prime_power_coefficient(alpha, e);
    }
    Ok(d)
}
