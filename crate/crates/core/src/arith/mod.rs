//! Deterministic number-theoretic primitives: sieving, factorisation,
//! generalised divisor functions, prime sums and smooth-number enumeration.

mod divisor;
mod segmented;
mod sieve;
mod smooth;

pub use divisor::{divisor_alpha, divisor_alpha_table, prime_power_coefficient};
pub use segmented::{for_each_prime_in, MAX_SEGMENTED_LIMIT};
pub use sieve::{factorize, Factorization, PrimeTable, MAX_SIEVE_LIMIT};
pub use smooth::{enumerate_smooth, for_each_composed, MAX_SMOOTH_BOUND};

use crate::error::{Error, Result};
use crate::stats::NeumaierSum;

/// `Σ_{y < p ≤ z} p^{-s}`.
pub fn prime_reciprocal_sum(y: f64, z: f64, s: f64, table: &PrimeTable) -> Result<f64> {
    if !(y >= 1.0 && y <= z) {
        return Err(Error::Domain(format!("need 1 <= y <= z, got y={y}, z={z}")));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("exponent must be positive, got {s}")));
    }
    table.check_covers(z, "upper cutoff")?;
    let acc: NeumaierSum = table.primes_in(y, z).iter().map(|&p| (p as f64).powf(-s)).collect();
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MERTENS: f64 = 0.261_497_212_847_642_8;

    #[test]
    fn reciprocal_sum_small() {
        let t = PrimeTable::new(100).unwrap();
        let s = prime_reciprocal_sum(1.0, 10.0, 1.0, &t).unwrap();
        assert!((s - (0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0)).abs() < 1e-15);
        assert!((s - 1.176_190_476_190_476).abs() < 1e-12);
        assert_eq!(prime_reciprocal_sum(7.0, 7.0, 2.0, &t).unwrap(), 0.0);
    }

    #[test]
    fn mertens_constant() {
        let t = PrimeTable::new(1_000_000).unwrap();
        let s = prime_reciprocal_sum(1.0, 1e6, 1.0, &t).unwrap();
        let diff = s - 1e6f64.ln().ln();
        assert!((diff - MERTENS).abs() < 0.01, "diff = {diff}");
    }

    #[test]
    fn additive_over_adjacent_windows() {
        let t = PrimeTable::new(100_000).unwrap();
        for (y, w, z, s) in [(1.0, 50.5, 1e5, 1.0), (10.0, 1000.0, 5e4, 0.8), (3.0, 3.0, 99.0, 1.3)] {
            let left = prime_reciprocal_sum(y, w, s, &t).unwrap();
            let right = prime_reciprocal_sum(w, z, s, &t).unwrap();
            let whole = prime_reciprocal_sum(y, z, s, &t).unwrap();
            assert!((left + right - whole).abs() <= 4.0 * f64::EPSILON * whole);
        }
    }

    #[test]
    fn reciprocal_sum_errors() {
        let t = PrimeTable::new(100).unwrap();
        assert!(prime_reciprocal_sum(0.5, 10.0, 1.0, &t).is_err());
        assert!(prime_reciprocal_sum(10.0, 5.0, 1.0, &t).is_err());
        assert!(prime_reciprocal_sum(1.0, 10.0, 0.0, &t).is_err());
        assert!(prime_reciprocal_sum(1.0, 1000.0, 1.0, &t).is_err());
    }
}
