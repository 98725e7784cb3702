use crate::error::{Error, Result};

/// Largest `limit` accepted by [`PrimeTable::new`].
///
/// The smallest-prime-factor array costs four bytes per integer, so the cap
/// corresponds to 4 GB of spf storage.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// All primes up to `limit`, plus a smallest-prime-factor array for fast
/// factorisation of every `n ≤ spf_limit`.
///
/// Immutable after construction; share it freely between threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    spf: Vec<u32>,
}

impl PrimeTable {
    /// Sieve up to `limit` with the spf array covering the whole range.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_spf_limit(limit, limit)
    }

    /// Sieve primes up to `limit` but keep smallest prime factors only up to
    /// `spf_limit`. Integers above `spf_limit` are factorised by trial
    /// division over the prime list.
    pub fn with_spf_limit(limit: u64, spf_limit: u64) -> Result<Self> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
            return Err(Error::Config(format!(
                "sieve limit {limit} outside [2, {MAX_SIEVE_LIMIT}]"
            )));
        }
        let spf_limit = spf_limit.clamp(1, limit);
        let (spf, mut primes) = linear_sieve(spf_limit as usize);
        if spf_limit < limit {
            primes = eratosthenes(limit as usize);
        }
        Ok(PrimeTable { limit, primes, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest `n` with a stored smallest prime factor.
    pub fn spf_limit(&self) -> u64 {
        (self.spf.len() as u64).saturating_sub(1)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `n`, for `2 ≤ n ≤ spf_limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 {
            return None;
        }
        self.spf.get(n as usize).map(|&p| p as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.primes.binary_search(&n).is_ok()
    }

    /// Primes in the half-open window `(y, z]`, truncated at the table limit.
    pub fn primes_in(&self, y: f64, z: f64) -> &[u64] {
        let lo = self.primes.partition_point(|&p| (p as f64) <= y);
        let hi = self.primes.partition_point(|&p| (p as f64) <= z);
        &self.primes[lo..hi.max(lo)]
    }

    /// `π(x)` for `x ≤ limit`.
    pub fn prime_count(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub(crate) fn check_covers(&self, bound: f64, what: &str) -> Result<()> {
        if bound > self.limit as f64 {
            return Err(Error::Config(format!(
                "{what} {bound} exceeds the prime table limit {}",
                self.limit
            )));
        }
        Ok(())
    }
}

fn linear_sieve(limit: usize) -> (Vec<u32>, Vec<u64>) {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u64> = Vec::new();
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u64);
        }
        let s = spf[n] as u64;
        for &p in &primes {
            if p > s {
                break;
            }
            let m = n as u64 * p;
            if m > limit as u64 {
                break;
            }
            spf[m as usize] = p as u32;
        }
    }
    (spf, primes)
}

fn eratosthenes(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if composite[n] {
            continue;
        }
        primes.push(n as u64);
        let mut m = n.saturating_mul(n);
        while m <= limit {
            composite[m] = true;
            m += n;
        }
    }
    primes
}

/// Prime factorisation `n = ∏ p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// `Ω(n)`: number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    /// `P(n)`, or `None` for `n = 1`.
    pub fn largest_prime_factor(&self) -> Option<u64> {
        self.pairs.last().map(|&(p, _)| p)
    }

    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Factorise `1 ≤ n ≤ table.limit()`.
pub fn factorize(n: u64, table: &PrimeTable) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorise 0".into()));
    }
    if n > table.limit() {
        return Err(Error::Config(format!(
            "{n} exceeds the prime table limit {}",
            table.limit()
        )));
    }
    let mut pairs: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64| match pairs.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => pairs.push((p, 1)),
    };
    let mut m = n;
    if m > table.spf_limit() {
        for &p in table.primes() {
            if p * p > m || m <= table.spf_limit() {
                break;
            }
            while m.is_multiple_of(p) {
                push(p);
                m /= p;
            }
        }
        if m > table.spf_limit() {
            // no factor up to √m remains, so m is prime
            push(m);
            m = 1;
        }
    }
    while m > 1 {
        let p = table.spf(m).expect("m is within the spf range");
        push(p);
        m /= p;
    }
    Ok(Factorization { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_sieve() {
        let t = PrimeTable::new(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.spf(9), Some(3));
        assert_eq!(t.spf(1), None);
    }

    #[test]
    fn prime_count_to_a_million() {
        let t = PrimeTable::new(1_000_000).unwrap();
        assert_eq!(t.primes().len(), 78498);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let t = PrimeTable::new(100_000).unwrap();
        let reference: Vec<u64> = (2..=100_000).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(t.primes(), reference.as_slice());
        for n in 2..=100_000u64 {
            let p = t.spf(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(trial_division_is_prime(p));
            assert!((2..p).all(|d| n % d != 0), "spf({n}) = {p} is not the least factor");
        }
    }

    #[test]
    fn limit_out_of_range() {
        assert!(matches!(PrimeTable::new(1), Err(Error::Config(_))));
        assert!(matches!(PrimeTable::new(MAX_SIEVE_LIMIT + 1), Err(Error::Config(_))));
    }

    #[test]
    fn factorize_examples() {
        let t = PrimeTable::new(1000).unwrap();
        let f = factorize(12, &t).unwrap();
        assert_eq!(f.pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(f.big_omega(), 3);
        assert_eq!(f.largest_prime_factor(), Some(3));

        let one = factorize(1, &t).unwrap();
        assert!(one.pairs().is_empty());
        assert_eq!(one.big_omega(), 0);
        assert_eq!(one.largest_prime_factor(), None);

        assert_eq!(factorize(97, &t).unwrap().pairs(), &[(97, 1)]);
        assert!(matches!(factorize(0, &t), Err(Error::Domain(_))));
        assert!(matches!(factorize(1001, &t), Err(Error::Config(_))));
    }

    #[test]
    fn trial_division_fallback_matches_spf() {
        let full = PrimeTable::new(50_000).unwrap();
        let partial = PrimeTable::with_spf_limit(50_000, 300).unwrap();
        assert_eq!(full.primes(), partial.primes());
        for n in (1..=50_000u64).step_by(7) {
            assert_eq!(factorize(n, &full).unwrap(), factorize(n, &partial).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn primes_in_uses_half_open_windows() {
        let t = PrimeTable::new(100).unwrap();
        assert_eq!(t.primes_in(1.5, 10.0), &[2, 3, 5, 7]);
        assert_eq!(t.primes_in(3.0, 7.0), &[5, 7]);
        assert_eq!(t.primes_in(7.0, 7.0), &[] as &[u64]);
        assert_eq!(t.primes_in(8.0, 7.0), &[] as &[u64]);
    }
}
