use crate::arith::{for_each_prime_in, PrimeTable};
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::random::{EulerProductSpec, EulerWindow, Seed, SteinhausSample};
use crate::stats::{EstimatorMethod, MomentEstimate, NeumaierSum};

/// Tolerance multiplier applied to [`TwoPointExact::envelope`].
pub const ENVELOPE_CONSTANT: f64 = 5.0;

/// Main term of `E[|G(t)|^b |G(0)|^c]` together with the size
/// `1/(√y log y)` of the neglected relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointExact {
    pub main: f64,
    pub envelope: f64,
}

/// `Σ p^{−1−2σ}` and `Σ cos(t log p) p^{−1−2σ}` over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointSums {
    pub plain: f64,
    pub twisted: f64,
}

impl TwoPointSums {
    pub fn from_primes<I: IntoIterator<Item = u64>>(primes: I, sigma: f64, t: f64) -> Self {
        let mut plain = NeumaierSum::new();
        let mut twisted = NeumaierSum::new();
        for p in primes {
            let lp = (p as f64).ln();
            let w = (-(1.0 + 2.0 * sigma) * lp).exp();
            plain.add(w);
            twisted.add((t * lp).cos() * w);
        }
        TwoPointSums { plain: plain.total(), twisted: twisted.total() }
    }

    /// `Σ (b² + 2bc cos(t log p) + c²)/(4p^{1+2σ})`.
    pub fn exponent(&self, b: f64, c: f64) -> f64 {
        ((b * b + c * c) * self.plain + 2.0 * b * c * self.twisted) / 4.0
    }
}

fn envelope(spec: &EulerProductSpec) -> f64 {
    1.0 / (spec.y().sqrt() * spec.y().ln())
}

pub fn two_point_moment_exact(
    spec: &EulerProductSpec,
    t: f64,
    b: f64,
    c: f64,
    table: &PrimeTable,
) -> Result<TwoPointExact> {
    let sums = TwoPointSums::from_primes(spec.primes(table)?.iter().copied(), spec.sigma(), t);
    Ok(TwoPointExact { main: sums.exponent(b, c).exp(), envelope: envelope(spec) })
}

/// [`TwoPointSums`] for each of `ts`, sieving the window on the fly so
/// that `z` may exceed any materialised table.
pub fn two_point_sums_sieved(spec: &EulerProductSpec, ts: &[f64]) -> Result<Vec<TwoPointSums>> {
    let mut plain = NeumaierSum::new();
    let mut twisted = vec![NeumaierSum::new(); ts.len()];
    for_each_prime_in(spec.y(), spec.z(), |p| {
        let lp = (p as f64).ln();
        let w = (-(1.0 + 2.0 * spec.sigma()) * lp).exp();
        plain.add(w);
        for (acc, t) in twisted.iter_mut().zip(ts) {
            acc.add((t * lp).cos() * w);
        }
    })?;
    Ok(twisted.iter().map(|tw| TwoPointSums { plain: plain.total(), twisted: tw.total() }).collect())
}

/// Batch means whenever `b + c > 2`.
pub fn two_point_method(b: f64, c: f64) -> EstimatorMethod {
    if b + c > 2.0 {
        EstimatorMethod::BatchMeans
    } else {
        EstimatorMethod::Plain
    }
}

/// Empirical mean of `|G(t)|^b |G(0)|^c`.
pub fn two_point_moment_mc(
    spec: &EulerProductSpec,
    t: f64,
    b: f64,
    c: f64,
    n_samples: usize,
    seed: Seed,
    table: &PrimeTable,
) -> Result<MomentEstimate> {
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be positive".into()));
    }
    let window = EulerWindow::new(spec, table)?;
    let limit = window.primes().last().copied().unwrap_or(2).max(2);
    let values = map_indexed(n_samples, |i| {
        let sample = SteinhausSample::new(limit, seed.derive(i as u64))?;
        let f = window.draw(&sample)?;
        let at_zero = window.log_modulus(&f, 0.0);
        let at_t = if t == 0.0 { at_zero } else { window.log_modulus(&f, t) };
        Ok((b * at_t + c * at_zero).exp())
    })?;
    Ok(MomentEstimate::from_samples(&values, two_point_method(b, c)))
}
