//! Summation and Monte Carlo bookkeeping shared by the estimators.
//!
//! Every reduction over samples goes through [`pairwise_sum`] on a vector
//! whose order is fixed by sample index, so results do not depend on how
//! many worker threads produced the values.

use std::fmt;

/// Neumaier (improved Kahan) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        acc.extend(iter);
        acc
    }
}

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (cascade) summation with a fixed split rule.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Numerically stable `ln(Σ exp(x_i))`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

/// How the standard error of a [`MomentEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorMethod {
    /// Sample standard deviation over `√n`.
    Plain,
    /// Standard deviation of [`BATCH_COUNT`] contiguous batch means over `√BATCH_COUNT`.
    BatchMeans,
}

impl EstimatorMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorMethod::Plain => "plain",
            EstimatorMethod::BatchMeans => "batch-means",
        }
    }
}

impl fmt::Display for EstimatorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const BATCH_COUNT: usize = 16;

/// Monte Carlo estimate of an expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub method: EstimatorMethod,
}

impl MomentEstimate {
    /// Summarise per-sample values. Batch means fall back to the plain
    /// estimator when there are fewer samples than batches.
    pub fn from_samples(values: &[f64], method: EstimatorMethod) -> Self {
        let n = values.len();
        assert!(n >= 1, "need at least one sample");
        let mean = pairwise_sum(values) / n as f64;
        let method = if n < BATCH_COUNT { EstimatorMethod::Plain } else { method };
        let stderr = match method {
            EstimatorMethod::Plain => plain_stderr(values, mean),
            EstimatorMethod::BatchMeans => batch_means_stderr(values),
        };
        MomentEstimate { mean, stderr, n_samples: n, method }
    }

    /// Standard error of `ln(mean)` by the delta method.
    pub fn log_stderr(&self) -> f64 {
        self.stderr / self.mean
    }

    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.stderr
    }
}

fn plain_stderr(values: &[f64], mean: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (var / n as f64).sqrt()
}

fn batch_means_stderr(values: &[f64]) -> f64 {
    let n = values.len();
    let means: Vec<f64> = (0..BATCH_COUNT)
        .map(|b| {
            let lo = b * n / BATCH_COUNT;
            let hi = (b + 1) * n / BATCH_COUNT;
            pairwise_sum(&values[lo..hi]) / (hi - lo) as f64
        })
        .collect();
    let grand = pairwise_sum(&means) / BATCH_COUNT as f64;
    plain_stderr(&means, grand)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let acc: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn constant_samples_have_zero_stderr() {
        let v = vec![1.0; 100];
        for method in [EstimatorMethod::Plain, EstimatorMethod::BatchMeans] {
            let est = MomentEstimate::from_samples(&v, method);
            assert_eq!(est.mean, 1.0);
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn plain_stderr_matches_textbook_formula() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let est = MomentEstimate::from_samples(&v, EstimatorMethod::Plain);
        assert_eq!(est.mean, 2.5);
        let expected = (5.0f64 / 3.0 / 4.0).sqrt();
        assert!((est.stderr - expected).abs() < 1e-15);
    }

    #[test]
    fn batch_means_fall_back_for_tiny_samples() {
        let est = MomentEstimate::from_samples(&[1.0, 3.0], EstimatorMethod::BatchMeans);
        assert_eq!(est.method, EstimatorMethod::Plain);
    }

    #[test]
    fn log_sum_exp_is_stable() {
        let v = [1000.0, 1000.0];
        assert!((log_sum_exp(&v) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
