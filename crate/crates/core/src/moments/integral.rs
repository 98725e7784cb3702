use super::pseudo::estimator_for;
use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::random::{EulerProductSpec, EulerWindow, Seed, SteinhausSample};
use crate::stats::{log_sum_exp, MomentEstimate};

/// Default quadrature density, in points per `1/log z`.
pub const DEFAULT_GRID_DENSITY: u32 = 8;

/// Monte Carlo estimate of `E[(∫_T^{T(1+width)} |G(t)|^{2α} dt)^q]`;
/// `width = 1` gives the dyadic interval `[T, 2T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralMomentConfig {
    pub spec: EulerProductSpec,
    pub t_scale: f64,
    pub width: f64,
    pub alpha: f64,
    pub q: f64,
    pub grid_points_per_unit_scale: u32,
    pub n_samples: usize,
    pub seed: Seed,
}

impl IntegralMomentConfig {
    pub fn dyadic(spec: EulerProductSpec, t_scale: f64, alpha: f64, q: f64, n_samples: usize, seed: Seed) -> Self {
        IntegralMomentConfig {
            spec,
            t_scale,
            width: 1.0,
            alpha,
            q,
            grid_points_per_unit_scale: DEFAULT_GRID_DENSITY,
            n_samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_scale > 0.0 && self.t_scale.is_finite()) {
            return Err(Error::Config(format!("T must be positive, got {}", self.t_scale)));
        }
        if !(self.width >= 0.0 && self.width.is_finite()) {
            return Err(Error::Config(format!("width must be non-negative, got {}", self.width)));
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.q >= 0.0 && self.q.is_finite()) {
            return Err(Error::Config(format!("q must be non-negative, got {}", self.q)));
        }
        if self.grid_points_per_unit_scale < 1 {
            return Err(Error::Config(
                "grid_points_per_unit_scale must be >= 1: coarser grids under-resolve the 1/log z correlation scale".into(),
            ));
        }
        if self.n_samples < 2 {
            return Err(Error::Config(format!("n_samples must be >= 2, got {}", self.n_samples)));
        }
        Ok(())
    }

    pub fn interval_length(&self) -> f64 {
        self.t_scale * self.width
    }

    /// Number of trapezoid panels; the realised step never exceeds
    /// `1/(grid_points_per_unit_scale · log z)`.
    pub fn panels(&self) -> usize {
        let target = 1.0 / (self.grid_points_per_unit_scale as f64 * self.spec.z().ln());
        (self.interval_length() / target).ceil().max(1.0) as usize
    }

    pub fn step(&self) -> f64 {
        self.interval_length() / self.panels() as f64
    }

    /// Relative trapezoid error bound `h·α·Λ`, where `Λ` bounds the
    /// derivative of `log|G|` (see [`EulerWindow::lipschitz`]).
    pub fn relative_error_bound(&self, table: &PrimeTable) -> Result<f64> {
        let window = EulerWindow::new(&self.spec, table)?;
        Ok(self.step() * self.alpha * window.lipschitz())
    }
}

/// `ln ∫ |G|^{2α}` by the trapezoid rule for every sample.
pub fn log_integrals(config: &IntegralMomentConfig, table: &PrimeTable) -> Result<Vec<f64>> {
    config.validate()?;
    let window = EulerWindow::new(&config.spec, table)?;
    let limit = window.primes().last().copied().unwrap_or(2).max(2);
    let length = config.interval_length();
    let panels = config.panels();
    let h = config.step();
    let two_alpha = 2.0 * config.alpha;
    map_indexed(config.n_samples, |i| {
        if length == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let sample = SteinhausSample::new(limit, config.seed.derive(i as u64))?;
        let f = window.draw(&sample)?;
        let mut logs = vec![0.0; panels + 1];
        window.log_modulus_grid(&f, config.t_scale, h, &mut logs);
        let last = logs.len() - 1;
        for (j, l) in logs.iter_mut().enumerate() {
            let weight = if j == 0 || j == last { 0.5 * h } else { h };
            *l = two_alpha * *l + weight.ln();
        }
        let v = log_sum_exp(&logs);
        if v.is_nan() {
            return Err(Error::Numerical(format!("non-finite integral for sample {i}")));
        }
        Ok(v)
    })
}

pub fn euler_integral_moment_mc(config: &IntegralMomentConfig, table: &PrimeTable) -> Result<MomentEstimate> {
    let logs = log_integrals(config, table)?;
    moment_from_log_integrals(&logs, config.q, config.alpha)
}

/// `E[I^q]` from the output of [`log_integrals`], so that one set of
/// samples can serve several `q`.
pub fn moment_from_log_integrals(logs: &[f64], q: f64, alpha: f64) -> Result<MomentEstimate> {
    let values: Vec<f64> = if q == 0.0 { vec![1.0; logs.len()] } else { logs.iter().map(|l| (q * l).exp()).collect() };
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("moment sample overflowed: {v}")));
    }
    Ok(MomentEstimate::from_samples(&values, estimator_for(q, alpha)))
}
