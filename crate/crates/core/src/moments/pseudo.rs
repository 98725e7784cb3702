use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::random::{DivisorPolynomial, Seed, SteinhausSample};
use crate::stats::{EstimatorMethod, MomentEstimate};

/// Monte Carlo estimate of `E|Σ_{n≤x} d_α(n) f(n)/√n|^{2q}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudomomentConfig {
    pub x: u64,
    pub alpha: f64,
    pub q: f64,
    pub n_samples: usize,
    pub seed: Seed,
}

impl PseudomomentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.x == 0 {
            return Err(Error::Config("x must be positive".into()));
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::Config(format!("q must be positive, got {}", self.q)));
        }
        if self.n_samples < 2 {
            return Err(Error::Config(format!("n_samples must be >= 2, got {}", self.n_samples)));
        }
        Ok(())
    }

    /// `K = ⌊log log log x⌋`, defined once `log log log x ≥ 0`.
    pub fn k_level(&self) -> Option<u32> {
        let lll = (self.x as f64).ln().ln().ln();
        (lll >= 0.0).then(|| lll.floor() as u32)
    }

    pub fn method(&self) -> EstimatorMethod {
        estimator_for(self.q, self.alpha)
    }
}

/// Batch means once `qα ≥ 1`, where the upper tail starts to dominate.
pub fn estimator_for(q: f64, alpha: f64) -> EstimatorMethod {
    if q * alpha >= 1.0 {
        EstimatorMethod::BatchMeans
    } else {
        EstimatorMethod::Plain
    }
}

/// `|Σ_{n≤x} d_α(n) f(n)/√n|²` for samples `seed.derive(0..n_samples)`.
pub fn pseudomoment_squares(
    x: u64,
    alpha: f64,
    n_samples: usize,
    seed: Seed,
    table: &PrimeTable,
) -> Result<Vec<f64>> {
    let poly = DivisorPolynomial::new(alpha, x, table)?;
    map_indexed(n_samples, |i| {
        let sample = SteinhausSample::new(x.max(2), seed.derive(i as u64))?;
        Ok(poly.evaluate(&sample, table)?.norm_sqr())
    })
}

pub fn pseudomoment_mc(config: &PseudomomentConfig, table: &PrimeTable) -> Result<MomentEstimate> {
    config.validate()?;
    let squares = pseudomoment_squares(config.x, config.alpha, config.n_samples, config.seed, table)?;
    Ok(moment_from_squares(&squares, config.q, config.method()))
}

/// Estimates for several `q` from one shared sample set.
pub fn pseudomoment_mc_multi(
    x: u64,
    alpha: f64,
    qs: &[f64],
    n_samples: usize,
    seed: Seed,
    table: &PrimeTable,
) -> Result<Vec<MomentEstimate>> {
    for &q in qs {
        PseudomomentConfig { x, alpha, q, n_samples, seed }.validate()?;
    }
    let squares = pseudomoment_squares(x, alpha, n_samples, seed, table)?;
    Ok(qs.iter().map(|&q| moment_from_squares(&squares, q, estimator_for(q, alpha))).collect())
}

fn moment_from_squares(squares: &[f64], q: f64, method: EstimatorMethod) -> MomentEstimate {
    let values: Vec<f64> = squares.iter().map(|s| s.powf(q)).collect();
    MomentEstimate::from_samples(&values, method)
}
