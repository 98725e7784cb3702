use super::normal::{ln_normal_cdf, normal_quantile};
use crate::error::{Error, Result};
use crate::moments::estimator_for;
use crate::parallel::map_indexed;
use crate::random::Seed;
use crate::stats::{log_sum_exp, MomentEstimate};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;

/// Number of largest points drawn exactly per field.
pub const TOP_POINTS: usize = 4096;

/// Minimum number of fields per θ.
pub const MIN_FIELDS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplingMethod {
    /// Every point drawn.
    Exact,
    /// The [`TOP_POINTS`] largest drawn as exact order statistics, the rest
    /// replaced by their conditional mean.
    OrderStatistics,
}

impl SamplingMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplingMethod::Exact => "exact",
            SamplingMethod::OrderStatistics => "order-statistics",
        }
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One point of the surrogate scan. `w` stands in for `log log x` and
/// `θ` for `log T / log log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateConfig {
    pub theta: f64,
    pub w: f64,
    pub alpha: f64,
    pub q: f64,
    pub n_fields: usize,
    pub seed: Seed,
}

impl SurrogateConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(Error::Domain(format!("W must be positive, got {}", self.w)));
        }
        if !(self.theta > -1.0 && self.theta.is_finite()) {
            return Err(Error::Domain(format!("theta must exceed -1, got {}", self.theta)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.q >= 0.0 && self.q.is_finite()) {
            return Err(Error::Domain(format!("q must be non-negative, got {}", self.q)));
        }
        if self.n_fields < MIN_FIELDS {
            return Err(Error::Config(format!("need at least {MIN_FIELDS} fields, got {}", self.n_fields)));
        }
        Ok(())
    }

    /// `e^{W(1+θ)}`.
    pub fn nominal_points(&self) -> f64 {
        (self.w * (1.0 + self.theta)).exp()
    }

    /// `W/2` for `θ ≥ 0`, `(W + log T)/2 = W(1+θ)/2` below.
    pub fn variance(&self) -> f64 {
        0.5 * self.w * (1.0 + self.theta.min(0.0))
    }

    /// Log of the deterministic factor multiplying `E[(Σ e^{2αX_i})^q]`.
    pub fn log_prefactor(&self) -> f64 {
        let (w, q, t) = (self.w, self.q, self.theta);
        if t >= 0.0 {
            -2.0 * q * w * (1.0 + t)
        } else {
            -w * (2.0 * q * (1.0 + t) + (q * self.alpha).powi(2) * t)
        }
    }

    /// Log of the heuristic's closed form, up to powers of `W`.
    pub fn log_predicted(&self) -> f64 {
        let (w, q, t, a) = (self.w, self.q, self.theta, self.alpha);
        if t >= 0.0 {
            2.0 * a * q * w * (1.0 + t).sqrt() - 2.0 * q * w * (1.0 + t)
        } else {
            w * (t * (2.0 * (a - 1.0) * q - (q * a).powi(2)) + 2.0 * (a - 1.0) * q)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateResult {
    pub config: SurrogateConfig,
    pub nominal_points: f64,
    pub sampled_points: usize,
    pub method: SamplingMethod,
    /// Simulated contribution and its standard error.
    pub contribution: MomentEstimate,
    pub log_contribution: f64,
    pub log_predicted: f64,
}

impl SurrogateResult {
    pub fn predicted(&self) -> f64 {
        self.log_predicted.exp()
    }
}

/// `ln Σ_i exp(β X_i)` for `n` iid `N(0, σ²)`.
///
/// For `n > TOP_POINTS` the largest points come from the exact joint law
/// of the top order statistics, and the remaining `n − m` terms are replaced
/// by `(n−m)·E[e^{βX} | X < u]` with `u` the `m`-th largest value.
pub fn log_exp_sum<R: Rng>(rng: &mut R, n: f64, sigma: f64, beta: f64) -> f64 {
    if n <= TOP_POINTS as f64 {
        let count = n.round().max(1.0) as usize;
        let terms: Vec<f64> = (0..count).map(|_| beta * sigma * rng.sample::<f64, _>(StandardNormal)).collect();
        return log_sum_exp(&terms);
    }
    let mut log_u = 0.0;
    let mut terms = Vec::with_capacity(TOP_POINTS + 1);
    let mut x = 0.0;
    for i in 0..TOP_POINTS {
        let b: f64 = 1.0 - rng.random::<f64>();
        log_u += b.ln() / (n - i as f64);
        // upper tail probability of the current order statistic
        let s = -log_u.exp_m1();
        x = -sigma * normal_quantile(s);
        terms.push(beta * x);
    }
    let a = x / sigma;
    let bulk = (n - TOP_POINTS as f64).ln() + 0.5 * (beta * sigma).powi(2) + ln_normal_cdf(a - beta * sigma) - ln_normal_cdf(a);
    terms.push(bulk);
    log_sum_exp(&terms)
}

/// Average of `prefactor·(Σ e^{2αX_i})^q` over fields `seed.stream(0..n_fields)`.
///
/// The same seed across a θ grid gives common random numbers.
pub fn surrogate_integral_moment(config: &SurrogateConfig) -> Result<SurrogateResult> {
    config.validate()?;
    let n = config.nominal_points();
    let sigma = config.variance().sqrt();
    let beta = 2.0 * config.alpha;
    let log_sums = map_indexed(config.n_fields, |f| {
        let mut rng = config.seed.stream(f as u64);
        Ok(log_exp_sum(&mut rng, n, sigma, beta))
    })?;
    let q = config.q;
    let shift = q * log_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_sums.iter().map(|l| (q * l - shift).exp()).collect();
    let est = MomentEstimate::from_samples(&scaled, estimator_for(q, config.alpha));
    let log_scale = config.log_prefactor() + shift;
    let log_contribution = log_scale + est.mean.ln();
    let factor = log_scale.exp();
    let contribution = MomentEstimate { mean: est.mean * factor, stderr: est.stderr * factor, ..est };
    let (sampled_points, method) = if n <= TOP_POINTS as f64 {
        (n.round().max(1.0) as usize, SamplingMethod::Exact)
    } else {
        (TOP_POINTS, SamplingMethod::OrderStatistics)
    };
    Ok(SurrogateResult {
        config: *config,
        nominal_points: n,
        sampled_points,
        method,
        contribution,
        log_contribution,
        log_predicted: config.log_predicted(),
    })
}

/// Run every θ of the grid and return the index of the largest simulated
/// log-contribution along with all results.
pub fn contribution_maximizer(base: &SurrogateConfig, thetas: &[f64]) -> Result<(usize, Vec<SurrogateResult>)> {
    if thetas.is_empty() {
        return Err(Error::Config("theta grid is empty".into()));
    }
    let results = thetas
        .iter()
        .map(|&theta| surrogate_integral_moment(&SurrogateConfig { theta, ..*base }))
        .collect::<Result<Vec<_>>>()?;
    let best = results
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.log_contribution.total_cmp(&b.1.log_contribution))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok((best, results))
}
