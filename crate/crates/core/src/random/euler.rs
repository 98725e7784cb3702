use super::steinhaus::SteinhausSample;
use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::stats::NeumaierSum;
use num_complex::Complex64;

/// Smallest admissible lower cutoff; with `y = 3/2` the prime 2 is included.
pub const LOWER_CUTOFF: f64 = 1.5;

/// A prime window `(y, z]` and shift `σ`, describing
/// `G(t) = ∏_{y<p≤z} (1 − f(p) p^{−1/2−σ−it})^{−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProductSpec {
    y: f64,
    z: f64,
    sigma: f64,
    k: Option<u32>,
}

impl EulerProductSpec {
    /// `y == z` is accepted and gives the empty product; splitting at a
    /// regime boundary produces one such window.
    pub fn new(y: f64, z: f64, sigma: f64) -> Result<Self> {
        if !(y.is_finite() && z.is_finite() && sigma.is_finite()) {
            return Err(Error::Domain(format!("non-finite window ({y}, {z}] or sigma {sigma}")));
        }
        if y < LOWER_CUTOFF {
            return Err(Error::Domain(format!("lower cutoff {y} below {LOWER_CUTOFF}")));
        }
        if z < y {
            return Err(Error::Domain(format!("window ({y}, {z}] is reversed")));
        }
        if sigma < -10.0 / z.ln() {
            return Err(Error::Domain(format!("sigma = {sigma} below -10/log z = {}", -10.0 / z.ln())));
        }
        if sigma <= -0.5 {
            return Err(Error::Domain(format!("sigma = {sigma} must exceed -1/2")));
        }
        Ok(EulerProductSpec { y, z, sigma, k: None })
    }

    /// Window `(3/2, x^{e^{−k}}]`.
    pub fn from_level(x: f64, k: u32, sigma: f64) -> Result<Self> {
        if !(x > LOWER_CUTOFF) {
            return Err(Error::Domain(format!("x = {x} must exceed {LOWER_CUTOFF}")));
        }
        let z = x.powf((-(k as f64)).exp()).max(LOWER_CUTOFF);
        let mut spec = Self::new(LOWER_CUTOFF, z, sigma)?;
        spec.k = Some(k);
        Ok(spec)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn level(&self) -> Option<u32> {
        self.k
    }

    /// The primes of the window.
    pub fn primes<'a>(&self, table: &'a PrimeTable) -> Result<&'a [u64]> {
        table.check_covers(self.z, "window upper cutoff")?;
        Ok(table.primes_in(self.y, self.z))
    }
}

/// Split `(3/2, x^{e^{−k}}]` at `exp(1/T)` into small and large primes.
///
/// Requires `e^k/log x ≤ T ≤ 1`. The small cutoff is clamped to the full
/// window, so at `T = e^k/log x` the large window is empty.
pub fn split_spec(x: f64, k: u32, t_scale: f64, sigma: f64) -> Result<(EulerProductSpec, EulerProductSpec)> {
    let full = EulerProductSpec::from_level(x, k, sigma)?;
    let lower = (k as f64).exp() / x.ln();
    if t_scale < lower * (1.0 - 1e-12) {
        return Err(Error::Regime(format!(
            "T = {t_scale} is below e^k/log x = {lower}: small-t range, the product needs no split"
        )));
    }
    if !(t_scale <= 1.0) {
        return Err(Error::Regime(format!("T = {t_scale} exceeds 1: large-t range, the product needs no split")));
    }
    let mut cut = (1.0 / t_scale).exp().clamp(LOWER_CUTOFF, full.z);
    if cut > full.z * (1.0 - 1e-12) {
        cut = full.z;
    }
    let mut small = EulerProductSpec::new(LOWER_CUTOFF, cut, sigma)?;
    let mut large = EulerProductSpec::new(cut, full.z, sigma)?;
    small.k = Some(k);
    large.k = Some(k);
    Ok((small, large))
}

/// Principal-branch `log G(t) = −Σ log(1 − f(p) p^{−1/2−σ−it})`.
pub fn euler_log(sample: &SteinhausSample, spec: &EulerProductSpec, t: f64, table: &PrimeTable) -> Result<Complex64> {
    let primes = spec.primes(table)?;
    if spec.z >= 2.0 && (spec.z as u64) > sample.limit() {
        return Err(Error::Config(format!(
            "window reaches {} but the sample covers primes up to {}",
            spec.z,
            sample.limit()
        )));
    }
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for &p in primes {
        let lp = (p as f64).ln();
        let r = (-(0.5 + spec.sigma) * lp).exp();
        assert!(r < 1.0, "factor modulus {r} at p = {p} is not below 1");
        let w = sample.value(p) * Complex64::from_polar(r, -t * lp);
        let term = -(Complex64::new(1.0, 0.0) - w).ln();
        re.add(term.re);
        im.add(term.im);
    }
    Ok(Complex64::new(re.total(), im.total()))
}

/// `G(t)` for one sample, accumulated in log space and exponentiated once.
pub fn euler_product(sample: &SteinhausSample, spec: &EulerProductSpec, t: f64, table: &PrimeTable) -> Result<Complex64> {
    Ok(euler_log(sample, spec, t, table)?.exp())
}

// Factors |1 − u|² lie in [(1−r)², (1+r)²]; eight of them multiply safely in f64.
const CHUNK: usize = 8;

/// Precomputed per-prime data for fast evaluation of `log|G|` on many
/// `t` for many samples.
#[derive(Debug, Clone)]
pub struct EulerWindow {
    spec: EulerProductSpec,
    primes: Vec<u64>,
    log_p: Vec<f64>,
    radius: Vec<f64>,
}

impl EulerWindow {
    pub fn new(spec: &EulerProductSpec, table: &PrimeTable) -> Result<Self> {
        let primes = spec.primes(table)?.to_vec();
        let log_p: Vec<f64> = primes.iter().map(|&p| (p as f64).ln()).collect();
        let radius: Vec<f64> = log_p.iter().map(|lp| (-(0.5 + spec.sigma) * lp).exp()).collect();
        if let Some(r) = radius.iter().copied().find(|&r| r >= 1.0) {
            return Err(Error::Numerical(format!("factor modulus {r} is not below 1")));
        }
        Ok(EulerWindow { spec: *spec, primes, log_p, radius })
    }

    pub fn spec(&self) -> &EulerProductSpec {
        &self.spec
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `f(p)` over the window.
    pub fn draw(&self, sample: &SteinhausSample) -> Result<Vec<Complex64>> {
        if let Some(&p) = self.primes.last() {
            if p > sample.limit() {
                return Err(Error::Config(format!("window prime {p} beyond sample limit {}", sample.limit())));
            }
        }
        Ok(sample.values_at(&self.primes))
    }

    /// `E|G(t)|² = ∏ (1 − p^{−1−2σ})^{−1}`.
    pub fn second_moment(&self) -> f64 {
        let acc: NeumaierSum = self.radius.iter().map(|r| -(-r * r).ln_1p()).collect();
        acc.total().exp()
    }

    /// Bound on `|d/dt log|G(t)||`: `Σ log p · r_p/(1 − r_p)` with `r_p = p^{−1/2−σ}`.
    pub fn lipschitz(&self) -> f64 {
        self.log_p.iter().zip(&self.radius).map(|(lp, r)| lp * r / (1.0 - r)).sum()
    }

    /// `log|G(t)|` for draws `f` from [`EulerWindow::draw`].
    pub fn log_modulus(&self, f: &[Complex64], t: f64) -> f64 {
        assert_eq!(f.len(), self.len());
        let mut acc = NeumaierSum::new();
        let mut prod = 1.0;
        for (i, ((fp, lp), r)) in f.iter().zip(&self.log_p).zip(&self.radius).enumerate() {
            let u = fp * Complex64::from_polar(*r, -t * lp);
            prod *= 1.0 - 2.0 * u.re + r * r;
            if (i + 1) % CHUNK == 0 {
                acc.add(prod.ln());
                prod = 1.0;
            }
        }
        acc.add(prod.ln());
        -0.5 * acc.total()
    }

    /// `log|G(t)|` at `t = start + j·step` for `j < len`, written into `out`.
    ///
    /// Each `f(p)p^{−1/2−σ−it}` is advanced by a fixed unit rotation, so
    /// the cost per point is one complex multiply per prime.
    pub fn log_modulus_grid(&self, f: &[Complex64], start: f64, step: f64, out: &mut [f64]) {
        assert_eq!(f.len(), self.len());
        let mut cur: Vec<Complex64> = f
            .iter()
            .zip(&self.log_p)
            .zip(&self.radius)
            .map(|((fp, lp), r)| fp * Complex64::from_polar(*r, -start * lp))
            .collect();
        let rot: Vec<Complex64> = self.log_p.iter().map(|lp| Complex64::from_polar(1.0, -step * lp)).collect();
        let r2: Vec<f64> = self.radius.iter().map(|r| r * r).collect();
        for slot in out.iter_mut() {
            let mut acc = NeumaierSum::new();
            for ((cu, rr), ro) in cur.chunks_mut(CHUNK).zip(r2.chunks(CHUNK)).zip(rot.chunks(CHUNK)) {
                let mut prod = 1.0;
                for ((u, r), w) in cu.iter_mut().zip(rr).zip(ro) {
                    prod *= 1.0 - 2.0 * u.re + r;
                    *u *= w;
                }
                acc.add(prod.ln());
            }
            *slot = -0.5 * acc.total();
        }
    }
}
