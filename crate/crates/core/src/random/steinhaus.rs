use super::seed::{unit_interval, Seed};
use crate::arith::{divisor_alpha_table, PrimeTable};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Largest `x` for which [`extend_multiplicative`] materialises `f(1..=x)`.
pub const MAX_EXTEND: u64 = 100_000_000;

/// One realisation of a Steinhaus random multiplicative function: `f(p)`
/// uniform on the unit circle, independently over primes.
///
/// `f(p) = exp(2πi·u)` where `u` is the first word of the ChaCha8 stream
/// numbered `p` under this sample's key, so values can be drawn for any
/// subset of primes in any order and always agree.
#[derive(Debug, Clone)]
pub struct SteinhausSample {
    seed: Seed,
    limit: u64,
    key: ChaCha8Rng,
}

impl SteinhausSample {
    pub fn new(limit: u64, seed: Seed) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Config(format!("sample limit must be >= 2, got {limit}")));
        }
        Ok(SteinhausSample { seed, limit, key: seed.steinhaus_key() })
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `f(p)`.
    pub fn value(&self, p: u64) -> Complex64 {
        debug_assert!(p <= self.limit, "prime {p} beyond sample limit {}", self.limit);
        let mut rng = self.key.clone();
        rng.set_stream(p);
        Complex64::from_polar(1.0, TAU * unit_interval(rng.next_u64()))
    }

    /// `f(p)` for each prime in `primes`.
    pub fn values_at(&self, primes: &[u64]) -> Vec<Complex64> {
        primes.iter().map(|&p| self.value(p)).collect()
    }
}

/// Shorthand for [`SteinhausSample::new`].
pub fn sample_steinhaus(limit: u64, seed: Seed) -> Result<SteinhausSample> {
    SteinhausSample::new(limit, seed)
}

/// `f(n)` for `1 ≤ n ≤ x`, extended completely multiplicatively.
#[derive(Debug, Clone)]
pub struct MultiplicativeValues {
    values: Vec<Complex64>,
}

impl MultiplicativeValues {
    /// `f(n)` for `1 ≤ n ≤ x`.
    pub fn get(&self, n: u64) -> Complex64 {
        assert!(n >= 1, "f is indexed from 1");
        self.values[n as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `f(1), f(2), …, f(x)`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.values[1..]
    }
}

fn check_extent(sample: &SteinhausSample, x: u64, table: &PrimeTable) -> Result<()> {
    if x == 0 {
        return Err(Error::Domain("x must be positive".into()));
    }
    if x > MAX_EXTEND {
        return Err(Error::Config(format!(
            "x = {x} exceeds the in-memory cap {MAX_EXTEND}; a streaming evaluator would be needed"
        )));
    }
    if x > table.spf_limit() || x > sample.limit() {
        return Err(Error::Config(format!(
            "x = {x} exceeds the prime table spf range {} or the sample limit {}",
            table.spf_limit(),
            sample.limit()
        )));
    }
    Ok(())
}

/// Materialise `f(1..=x)` via `f(n) = f(n / spf(n))·f(spf(n))`.
pub fn extend_multiplicative(
    sample: &SteinhausSample,
    x: u64,
    table: &PrimeTable,
) -> Result<MultiplicativeValues> {
    check_extent(sample, x, table)?;
    let x = x as usize;
    let mut values = vec![Complex64::new(0.0, 0.0); x + 1];
    values[1] = Complex64::new(1.0, 0.0);
    for n in 2..=x {
        let p = table.spf(n as u64).expect("within spf range") as usize;
        values[n] = if p == n { sample.value(p as u64) } else { values[n / p] * values[p] };
    }
    Ok(MultiplicativeValues { values })
}

/// The random Dirichlet polynomial `Σ_{n≤x} d_α(n) f(n)/√n`, with the
/// deterministic weights precomputed so many samples can share them.
#[derive(Debug, Clone)]
pub struct DivisorPolynomial {
    x: u64,
    weights: Vec<f64>,
}

impl DivisorPolynomial {
    pub fn new(alpha: f64, x: u64, table: &PrimeTable) -> Result<Self> {
        if x == 0 {
            return Err(Error::Domain("x must be positive".into()));
        }
        let d = divisor_alpha_table(x, alpha, table)?;
        let weights = d.iter().enumerate().map(|(n, &v)| if n == 0 { 0.0 } else { v / (n as f64).sqrt() }).collect();
        Ok(DivisorPolynomial { x, weights })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// Sum of squared weights, `Σ_{n≤x} d_α(n)²/n` (the exact second moment).
    pub fn mean_square(&self) -> f64 {
        let acc: crate::stats::NeumaierSum = self.weights.iter().map(|w| w * w).collect();
        acc.total()
    }

    /// Evaluate at one sample with compensated summation.
    pub fn evaluate(&self, sample: &SteinhausSample, table: &PrimeTable) -> Result<Complex64> {
        let f = extend_multiplicative(sample, self.x, table)?;
        let mut re = crate::stats::NeumaierSum::new();
        let mut im = crate::stats::NeumaierSum::new();
        for (w, v) in self.weights[1..].iter().zip(f.as_slice()) {
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Ok(Complex64::new(re.total(), im.total()))
    }
}

/// `Σ_{n≤x} d_α(n) f(n)/√n` for a single sample.
pub fn partial_sum(sample: &SteinhausSample, alpha: f64, x: u64, table: &PrimeTable) -> Result<Complex64> {
    check_extent(sample, x, table)?;
    DivisorPolynomial::new(alpha, x, table)?.evaluate(sample, table)
}
