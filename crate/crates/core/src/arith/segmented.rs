use crate::error::{Error, Result};

const SEGMENT: u64 = 1 << 18;

/// Largest upper cutoff accepted by [`for_each_prime_in`].
pub const MAX_SEGMENTED_LIMIT: u64 = 1 << 40;

/// Visit every prime in `(y, z]` in increasing order by a segmented sieve,
/// without materialising a prime table up to `z`.
pub fn for_each_prime_in<F: FnMut(u64)>(y: f64, z: f64, mut visit: F) -> Result<()> {
    if !(y.is_finite() && z.is_finite()) || z > MAX_SEGMENTED_LIMIT as f64 {
        return Err(Error::Config(format!("segmented sieve window ({y}, {z}] out of range")));
    }
    if z < 2.0 || z <= y {
        return Ok(());
    }
    let lo = if y < 1.0 { 1 } else { y.floor() as u64 } + 1;
    let hi = z.floor() as u64;
    let root = (hi as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    let mut start = lo.max(2);
    let mut mark = vec![true; SEGMENT as usize];
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        mark[..len].fill(true);
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (start.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= end {
                mark[(m - start) as usize] = false;
                m += p;
            }
        }
        for (i, &is_p) in mark[..len].iter().enumerate() {
            if is_p {
                visit(start + i as u64);
            }
        }
        start = end + 1;
    }
    Ok(())
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut m = i * i;
            while m <= n {
                sieve[m] = false;
                m += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeTable;

    #[test]
    fn matches_table() {
        let t = PrimeTable::new(2_000_000).unwrap();
        for (y, z) in [(1.0, 100.0), (1.5, 2.0), (99.5, 1e6), (262_140.0, 2e6), (7.0, 7.0)] {
            let mut got = Vec::new();
            for_each_prime_in(y, z, |p| got.push(p)).unwrap();
            assert_eq!(got, t.primes_in(y, z), "({y}, {z}]");
        }
    }
}
