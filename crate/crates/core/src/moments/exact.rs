use crate::arith::{prime_power_coefficient, PrimeTable};
use crate::error::{Error, Result};
use crate::random::EulerProductSpec;
use crate::stats::NeumaierSum;

/// Largest `m` accepted by [`exact_integer_moment`].
pub const MAX_INTEGER_MOMENT: u32 = 4;

const TAIL_TOLERANCE: f64 = 1e-15;

/// `E|G(0)|^{2m} = ∏_{y<p≤z} Σ_{j≥0} d_m(p^j)² p^{−j(1+2σ)}`.
pub fn exact_integer_moment(spec: &EulerProductSpec, m: u32, table: &PrimeTable) -> Result<f64> {
    if m == 0 || m > MAX_INTEGER_MOMENT {
        return Err(Error::Config(format!("m must be in 1..={MAX_INTEGER_MOMENT}, got {m}")));
    }
    let mut log_total = NeumaierSum::new();
    for &p in spec.primes(table)? {
        let x = (p as f64).powf(-1.0 - 2.0 * spec.sigma());
        log_total.add(local_factor(m as f64, x).ln());
    }
    Ok(log_total.total().exp())
}

/// `Σ_j d_m(p^j)² x^j`, stopped once the geometric bound on the tail is
/// below `TAIL_TOLERANCE` relative.
fn local_factor(m: f64, x: f64) -> f64 {
    let mut sum = 1.0;
    let mut j = 0u32;
    loop {
        let next_d = prime_power_coefficient(m, j + 1);
        let term = next_d * next_d * x.powi(j as i32 + 1);
        sum += term;
        // successive term ratios ((m+j+1)/(j+2))² x decrease in j
        let ratio = ((m + j as f64 + 1.0) / (j as f64 + 2.0)).powi(2) * x;
        if ratio < 1.0 && term * ratio / (1.0 - ratio) < TAIL_TOLERANCE * sum {
            return sum;
        }
        j += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{EulerWindow, Seed, SteinhausSample};
    use crate::stats::{EstimatorMethod, MomentEstimate};

    fn table() -> PrimeTable {
        PrimeTable::new(10_000).unwrap()
    }

    #[test]
    fn first_moment_is_geometric() {
        let t = table();
        let spec = EulerProductSpec::new(1.5, 1e4, 0.1).unwrap();
        let want = EulerWindow::new(&spec, &t).unwrap().second_moment();
        let got = exact_integer_moment(&spec, 1, &t).unwrap();
        assert!((got - want).abs() < 1e-13 * want);
    }

    #[test]
    fn second_moment_closed_form() {
        // Σ (j+1)² x^j = (1+x)/(1−x)³
        for x in [0.5f64, 0.1, 1e-4] {
            let want = (1.0 + x) / (1.0 - x).powi(3);
            assert!((local_factor(2.0, x) - want).abs() < 1e-14 * want);
        }
    }

    #[test]
    fn empty_window_and_cap() {
        let t = table();
        let spec = EulerProductSpec::new(24.0, 28.0, 0.0).unwrap();
        assert_eq!(exact_integer_moment(&spec, 3, &t).unwrap(), 1.0);
        assert!(exact_integer_moment(&spec, 5, &t).is_err());
        assert!(exact_integer_moment(&spec, 0, &t).is_err());
    }

    #[test]
    fn fourth_moment_against_monte_carlo() {
        let t = table();
        let spec = EulerProductSpec::new(1.5, 100.0, 0.0).unwrap();
        let exact = exact_integer_moment(&spec, 2, &t).unwrap();
        let w = EulerWindow::new(&spec, &t).unwrap();
        let values: Vec<f64> = (0..10_000)
            .map(|i| {
                let s = SteinhausSample::new(100, Seed(61).derive(i)).unwrap();
                (4.0 * w.log_modulus(&w.draw(&s).unwrap(), 0.0)).exp()
            })
            .collect();
        let est = MomentEstimate::from_samples(&values, EstimatorMethod::BatchMeans);
        assert!(est.z_score(exact).abs() <= 3.0, "{} ± {} vs {exact}", est.mean, est.stderr);
    }
}
