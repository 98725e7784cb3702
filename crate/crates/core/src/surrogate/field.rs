use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::random::Seed;
use crate::stats::NeumaierSum;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

/// Largest grid for the dense correlated path.
pub const MAX_CORRELATED_POINTS: usize = 4096;

/// Diagonal jitter added before factorisation, relative to the trace.
pub const JITTER: f64 = 1e-10;

/// `Σ_{y<p≤P} cos(|n1−n2|·log p / L)/(2p)`.
pub fn covariance(n1: i64, n2: i64, y: f64, p_max: f64, scale: f64, table: &PrimeTable) -> Result<f64> {
    table.check_covers(p_max, "covariance window")?;
    let primes = table.primes_in(y, p_max);
    Ok(lagged_covariance((n1 - n2).unsigned_abs(), primes, scale))
}

fn lagged_covariance(lag: u64, primes: &[u64], scale: f64) -> f64 {
    let d = lag as f64 / scale;
    let acc: NeumaierSum = primes.iter().map(|&p| (d * (p as f64).ln()).cos() / (2.0 * p as f64)).collect();
    acc.total()
}

/// Where the covariance of the field `X(0), …, X(n_points−1)` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceSource {
    /// Prime-sum kernel over `(y, P]` with scale `L` (standing for `log x`).
    PrimeWindow { y: f64, p_max: f64, scale: f64 },
    /// Independent coordinates of variance `V`.
    Iid { variance: f64 },
    /// Stationary kernel given by its lags `c(0), c(1), …`.
    Toeplitz { lags: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianFieldConfig {
    pub n_points: usize,
    pub source: CovarianceSource,
    pub seed: Seed,
}

/// Per-realisation statistics: `max X`, its index, and `ln Σ exp(2α X(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSummary {
    pub max: f64,
    pub argmax: usize,
    pub log_exp_sum: f64,
}

impl FieldSummary {
    /// `exp(2α·max) / Σ exp(2α X(n))`.
    pub fn max_share(&self, alpha: f64) -> f64 {
        (2.0 * alpha * self.max - self.log_exp_sum).exp()
    }
}

struct Accumulator {
    beta: f64,
    max: f64,
    argmax: usize,
    // running log-sum-exp of β·X
    log_sum: f64,
}

impl Accumulator {
    fn new(beta: f64) -> Self {
        Accumulator { beta, max: f64::NEG_INFINITY, argmax: 0, log_sum: f64::NEG_INFINITY }
    }

    fn push(&mut self, i: usize, x: f64) {
        if x > self.max {
            self.max = x;
            self.argmax = i;
        }
        let v = self.beta * x;
        let hi = self.log_sum.max(v);
        self.log_sum = if hi == f64::NEG_INFINITY { hi } else { hi + ((self.log_sum - hi).exp() + (v - hi).exp()).ln() };
    }

    fn finish(self) -> FieldSummary {
        FieldSummary { max: self.max, argmax: self.argmax, log_exp_sum: self.log_sum }
    }
}

/// Dense covariance matrix of the field.
pub fn covariance_matrix(n_points: usize, source: &CovarianceSource, table: &PrimeTable) -> Result<DMatrix<f64>> {
    let lags: Vec<f64> = match source {
        CovarianceSource::PrimeWindow { y, p_max, scale } => {
            table.check_covers(*p_max, "covariance window")?;
            let primes = table.primes_in(*y, *p_max);
            (0..n_points).map(|d| lagged_covariance(d as u64, primes, *scale)).collect()
        }
        CovarianceSource::Iid { variance } => {
            (0..n_points).map(|d| if d == 0 { *variance } else { 0.0 }).collect()
        }
        CovarianceSource::Toeplitz { lags } => {
            if lags.len() < n_points {
                return Err(Error::Config(format!("{} lags given for {n_points} points", lags.len())));
            }
            lags[..n_points].to_vec()
        }
    };
    Ok(DMatrix::from_fn(n_points, n_points, |i, j| lags[i.abs_diff(j)]))
}

/// Lower Cholesky factor of `cov + JITTER·trace·I`.
pub fn jittered_cholesky(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let jitter = JITTER * cov.trace().max(f64::MIN_POSITIVE);
    let mut m = cov.clone();
    for i in 0..m.nrows() {
        m[(i, i)] += jitter;
    }
    match m.cholesky() {
        Some(c) => Ok(c.l()),
        None => {
            let smallest = SymmetricEigen::new(cov.clone()).eigenvalues.min();
            Err(Error::Numerical(format!(
                "covariance is not positive semidefinite within jitter {jitter:e}: smallest eigenvalue {smallest:e}"
            )))
        }
    }
}

/// Draw `n_fields` independent realisations. Field `i` uses the RNG stream
/// `seed.stream(i)`, so results do not depend on scheduling.
pub fn simulate_field(
    config: &GaussianFieldConfig,
    n_fields: usize,
    alpha: f64,
    table: &PrimeTable,
) -> Result<Vec<FieldSummary>> {
    if config.n_points == 0 {
        return Err(Error::Config("n_points must be >= 1".into()));
    }
    let beta = 2.0 * alpha;
    if let CovarianceSource::Iid { variance } = config.source {
        if !(variance >= 0.0) {
            return Err(Error::Config(format!("variance must be non-negative, got {variance}")));
        }
        let sd = variance.sqrt();
        return map_indexed(n_fields, |f| {
            let mut rng = config.seed.stream(f as u64);
            let mut acc = Accumulator::new(beta);
            for i in 0..config.n_points {
                let z: f64 = rng.sample(StandardNormal);
                acc.push(i, sd * z);
            }
            Ok(acc.finish())
        });
    }
    if config.n_points > MAX_CORRELATED_POINTS {
        return Err(Error::Config(format!(
            "correlated fields are limited to {MAX_CORRELATED_POINTS} points, got {}",
            config.n_points
        )));
    }
    let l = jittered_cholesky(&covariance_matrix(config.n_points, &config.source, table)?)?;
    map_indexed(n_fields, |f| {
        let mut rng = config.seed.stream(f as u64);
        let z = DVector::from_fn(config.n_points, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = &l * z;
        let mut acc = Accumulator::new(beta);
        for (i, v) in x.iter().enumerate() {
            acc.push(i, *v);
        }
        Ok(acc.finish())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_reciprocal_sum;
    use crate::checks::cos_integral_proxy;
    use crate::stats::{EstimatorMethod, MomentEstimate};

    fn table() -> PrimeTable {
        PrimeTable::new(100_000).unwrap()
    }

    #[test]
    fn covariance_examples() {
        let t = table();
        let l = 1e6f64.ln();
        let v = covariance(7, 7, 1e3, 1e5, l, &t).unwrap();
        assert!((v - 0.5 * prime_reciprocal_sum(1e3, 1e5, 1.0, &t).unwrap()).abs() < 1e-15);
        assert_eq!(covariance(3, 40, 1e3, 1e5, l, &t).unwrap(), covariance(40, 3, 1e3, 1e5, l, &t).unwrap());
        let c = covariance(0, 50, 1e3, 1e5, l, &t).unwrap();
        let proxy = 0.5 * cos_integral_proxy(1e3, 1e5, 50.0 / l);
        assert!((c - proxy).abs() <= 0.05, "{c} vs {proxy}");
    }

    #[test]
    fn prime_kernel_is_psd() {
        let t = table();
        for (y, p_max, n, scale) in [(1.5, 1e4, 64, 1e6f64.ln()), (10.0, 1e5, 256, 1e8f64.ln()), (1e3, 1e5, 512, 20.0)] {
            let cov = covariance_matrix(n, &CovarianceSource::PrimeWindow { y, p_max, scale }, &t).unwrap();
            let smallest = SymmetricEigen::new(cov.clone()).eigenvalues.min();
            assert!(smallest >= -1e-8 * cov.trace(), "smallest eigenvalue {smallest}");
            jittered_cholesky(&cov).unwrap();
        }
    }

    #[test]
    fn indefinite_matrix_reports_eigenvalue() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        match jittered_cholesky(&m) {
            Err(Error::Numerical(msg)) => assert!(msg.contains("-1e0"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_point_is_gaussian() {
        let t = table();
        let config = GaussianFieldConfig { n_points: 1, source: CovarianceSource::Iid { variance: 2.0 }, seed: Seed(4) };
        let fields = simulate_field(&config, 10_000, 1.0, &t).unwrap();
        let maxes: Vec<f64> = fields.iter().map(|f| f.max).collect();
        let est = MomentEstimate::from_samples(&maxes, EstimatorMethod::Plain);
        assert!(est.mean.abs() <= 3.0 * (2.0f64 / 1e4).sqrt());
    }

    #[test]
    fn fully_correlated_field() {
        let t = table();
        let v = 3.0;
        let config = GaussianFieldConfig { n_points: 50, source: CovarianceSource::Toeplitz { lags: vec![v; 50] }, seed: Seed(9) };
        let fields = simulate_field(&config, 4000, 1.0, &t).unwrap();
        let maxes: Vec<f64> = fields.iter().map(|f| f.max).collect();
        let mean = maxes.iter().sum::<f64>() / maxes.len() as f64;
        let var = maxes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (maxes.len() - 1) as f64;
        // sampling sd of a variance estimate is v·√(2/(n−1))
        assert!((var - v).abs() <= 4.0 * v * (2.0f64 / 3999.0).sqrt(), "{var}");
        for f in &fields {
            // coordinates agree up to the jitter's √(1.5e-8) spread
            assert!((f.log_exp_sum - (2.0 * f.max + 50f64.ln())).abs() < 1e-2);
        }
    }

    #[test]
    fn iid_max_matches_exact_expectation() {
        // E max of 1e5 iid N(0,1), computed by numerical integration of 1 − Φ^n
        let exact = 4.384_301;
        let t = table();
        let config = GaussianFieldConfig { n_points: 100_000, source: CovarianceSource::Iid { variance: 1.0 }, seed: Seed(1) };
        let maxes: Vec<f64> = simulate_field(&config, 200, 1.0, &t).unwrap().iter().map(|f| f.max).collect();
        let est = MomentEstimate::from_samples(&maxes, EstimatorMethod::Plain);
        assert!(est.z_score(exact).abs() <= 3.0, "{} ± {}", est.mean, est.stderr);
    }

    #[test]
    fn normalised_max_increases_along_ladder() {
        let t = table();
        let ladder = [1_000usize, 10_000, 100_000];
        let ratios: Vec<f64> = ladder
            .iter()
            .map(|&n| {
                let config = GaussianFieldConfig { n_points: n, source: CovarianceSource::Iid { variance: 1.0 }, seed: Seed(2) };
                let fields = simulate_field(&config, 200, 1.0, &t).unwrap();
                fields.iter().map(|f| f.max).sum::<f64>() / 200.0 / (2.0 * (n as f64).ln()).sqrt()
            })
            .collect();
        assert!(ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[2] < 1.0, "{ratios:?}");
    }

    #[test]
    fn sum_dominated_by_max() {
        let t = table();
        let w: f64 = 10.0;
        let alpha = 2.0;
        let config = GaussianFieldConfig {
            n_points: w.exp().round() as usize,
            source: CovarianceSource::Iid { variance: w / 2.0 },
            seed: Seed(5),
        };
        let mut shares: Vec<f64> = simulate_field(&config, 200, alpha, &t).unwrap().iter().map(|f| f.max_share(alpha)).collect();
        shares.sort_by(f64::total_cmp);
        let median = 0.5 * (shares[99] + shares[100]);
        assert!(median >= 0.1, "median share {median}");
    }

    #[test]
    fn worker_count_does_not_matter() {
        let t = table();
        let config = GaussianFieldConfig {
            n_points: 100,
            source: CovarianceSource::PrimeWindow { y: 1.5, p_max: 1e4, scale: 1e6f64.ln() },
            seed: Seed(77),
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate_field(&config, 64, 1.5, &t).unwrap())
        };
        assert_eq!(run(1), run(8));
    }
}
