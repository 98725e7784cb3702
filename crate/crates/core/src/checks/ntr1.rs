use crate::arith::{for_each_composed, PrimeTable};
use crate::error::{Error, Result};
use crate::random::Seed;
use crate::stats::NeumaierSum;
use rand::Rng;

/// Largest `v` for which the numerator is enumerated.
pub const MAX_NTR1_V: f64 = 1e7;

/// Parameters of the rough-smooth short-interval sum; `delta` is the
/// declared exponent in `u ≤ v(1 − y^{−δ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ntr1Params {
    pub u: f64,
    pub v: f64,
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl Ntr1Params {
    pub fn validate(&self) -> Result<()> {
        let Ntr1Params { u, v, y, z, alpha, delta } = *self;
        let fail = |what: &str| Err(Error::Precondition(format!("{what} violated by {self:?}")));
        if !(delta > 0.0 && delta < 1.0) {
            return fail("0 < delta < 1");
        }
        if !(alpha >= 1.0) {
            return fail("alpha >= 1");
        }
        if !(y >= 3.0_f64.max(2.0 * alpha)) {
            return fail("max{3, 2 alpha} <= y");
        }
        if !(y <= z) {
            return fail("y <= z");
        }
        if !(z <= y.powi(10)) {
            return fail("z <= y^10");
        }
        if !(u > 1.0) {
            return fail("1 < u");
        }
        if !(u <= v * (1.0 - y.powf(-delta))) {
            return fail("u <= v(1 - y^-delta)");
        }
        if !(v <= MAX_NTR1_V) {
            return fail("v <= 1e7 (enumeration cap)");
        }
        Ok(())
    }
}

/// `Σ_{u≤n≤v, p|n ⇒ y<p≤z} α^{Ω(n)}` divided by
/// `((v−u)α/log y)·∏_{y<p≤z}(1 − α/p)^{−1}`.
pub fn ntr1_ratio(params: &Ntr1Params, table: &PrimeTable) -> Result<f64> {
    params.validate()?;
    table.check_covers(params.z, "NTR1 upper cutoff")?;
    let Ntr1Params { u, v, y, z, alpha, .. } = *params;
    let primes = table.primes_in(y, z);
    let mut numerator = NeumaierSum::new();
    for_each_composed(primes, v.floor() as u64, |_, e| alpha.powi(e as i32), |n, w, _| {
        if n as f64 >= u {
            numerator.add(w);
        }
    });
    let log_euler: f64 = primes.iter().map(|&p| -(-alpha / p as f64).ln_1p()).sum();
    let denominator = (v - u) * alpha / y.ln() * log_euler.exp();
    Ok(numerator.total() / denominator)
}

/// `count` random tuples satisfying the hypotheses with the given `delta`,
/// `z` and `v` at most `cap`.
pub fn admissible_ntr1_tuples(count: usize, delta: f64, cap: f64, seed: Seed) -> Vec<Ntr1Params> {
    let mut rng = seed.stream(0);
    let log_uniform = |lo: f64, hi: f64, rng: &mut rand_chacha::ChaCha8Rng| {
        (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
    };
    (0..count)
        .map(|_| {
            let alpha = 1.0 + 2.0 * rng.random::<f64>();
            let y = log_uniform(3f64.max(2.0 * alpha), 1e3, &mut rng);
            let z = log_uniform(y, y.powi(10).min(cap), &mut rng);
            let v = log_uniform(y, cap, &mut rng);
            let u_max = v * (1.0 - y.powf(-delta));
            let u = 1.0 + (u_max - 1.0) * rng.random::<f64>();
            Ntr1Params { u: u.max(1.0 + 1e-9), v, y, z, alpha, delta }
        })
        .collect()
}
