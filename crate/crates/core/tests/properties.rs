use num_complex::Complex64;
use proptest::prelude::*;
use psmom_core::arith::{enumerate_smooth, factorize, for_each_prime_in, PrimeTable};
use psmom_core::checks::{plancherel_check, CheckReport};
use psmom_core::moments::{pseudomoment_mc_multi, two_point_moment_exact};
use psmom_core::random::{euler_log, split_spec, EulerProductSpec, Seed, SteinhausSample};
use psmom_core::surrogate::{
    covariance_matrix, low_alpha_threshold, predict_regime, surrogate_integral_moment, CovarianceSource, SurrogateConfig,
};
use std::sync::OnceLock;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::new(200_000).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn report_error_fields(lhs in -1e6f64..1e6, rhs in -1e6f64..1e6) {
        let r = CheckReport::new(lhs, rhs, true);
        prop_assert_eq!(r.abs_err, (lhs - rhs).abs());
        prop_assert_eq!(r.rel_err, r.abs_err / lhs.abs().max(rhs.abs()).max(1e-300));
    }

    #[test]
    fn regime_exponent_matches_its_row(alpha in 1.0f64..4.0, q in 1e-3f64..1.5) {
        let r = predict_regime(alpha, q).unwrap();
        let closed = match r.regime {
            psmom_core::surrogate::Regime::SmallQLowAlpha => 2.0 * (alpha - 1.0) * q,
            psmom_core::surrogate::Regime::LargeAlpha => q * alpha * alpha / 2.0,
            _ => (q * alpha).powi(2),
        };
        prop_assert_eq!(r.exponent, closed);
        prop_assert_eq!(r.theta.is_none(), q >= 0.5);
    }

    #[test]
    fn regime_boundary_formulas_coincide(alpha in 1.0f64..2.0) {
        let q = low_alpha_threshold(alpha);
        prop_assume!(q > 0.0);
        let r = predict_regime(alpha, q).unwrap();
        prop_assert!(r.boundary);
        prop_assert!((2.0 * (alpha - 1.0) * q - (q * alpha).powi(2)).abs() <= 1e-15);
    }

    #[test]
    fn segmented_sieve_agrees_with_table(y in 1.0f64..150_000.0, len in 0.0f64..40_000.0) {
        let z = (y + len).min(200_000.0);
        let mut streamed = Vec::new();
        for_each_prime_in(y, z, |p| streamed.push(p)).unwrap();
        prop_assert_eq!(streamed.as_slice(), table().primes_in(y, z));
    }

    #[test]
    fn smooth_numbers_are_smooth(bound in 1u64..20_000, y in 2.0f64..60.0) {
        let t = table();
        let mut got: Vec<u64> = enumerate_smooth(bound, y, t).unwrap().collect();
        got.sort_unstable();
        let want: Vec<u64> = (1..=bound)
            .filter(|&n| factorize(n, t).unwrap().pairs().iter().all(|&(p, _)| p as f64 <= y))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn split_windows_multiply(k in 0u32..3, t_exp in 0.0f64..1.0, t in -50.0f64..50.0, seed in any::<u64>()) {
        let x = 1e5f64;
        let lo = (k as f64).exp() / x.ln();
        let t_scale = lo * (1.0 / lo).powf(t_exp);
        let (small, large) = split_spec(x, k, t_scale, 0.0).unwrap();
        let full = EulerProductSpec::from_level(x, k, 0.0).unwrap();
        let sample = SteinhausSample::new(100_000, Seed(seed)).unwrap();
        let whole = euler_log(&sample, &full, t, table()).unwrap().re;
        let parts = euler_log(&sample, &small, t, table()).unwrap().re + euler_log(&sample, &large, t, table()).unwrap().re;
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.abs().max(1.0));
    }

    #[test]
    fn steinhaus_values_on_unit_circle(seed in any::<u64>(), idx in 0usize..1000) {
        let s = SteinhausSample::new(10_000, Seed(seed)).unwrap();
        let p = table().primes()[idx];
        let v = s.value(p);
        prop_assert!((v.norm() - 1.0).abs() <= 1e-15);
        prop_assert_eq!(v, SteinhausSample::new(10_000, Seed(seed)).unwrap().value(p));
    }

    #[test]
    fn zero_exponents_give_one(y in 2.0f64..1e3, width in 1.0f64..100.0, t in -5.0f64..5.0) {
        let spec = EulerProductSpec::new(y, y * width, 0.0).unwrap();
        prop_assert_eq!(two_point_moment_exact(&spec, t, 0.0, 0.0, table()).unwrap().main, 1.0);
    }

    #[test]
    fn plancherel_lhs_has_closed_form(a in prop::collection::vec(-3.0f64..3.0, 1..8), sigma in 0.2f64..2.0) {
        prop_assume!(a.iter().any(|v| v.abs() > 1e-3));
        let coeffs: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let r = plancherel_check(&coeffs, sigma, 1e-8).unwrap();
        let mut oracle = 0.0;
        for (i, am) in a.iter().enumerate() {
            for (j, an) in a.iter().enumerate() {
                let (m, n) = ((i + 1) as f64, (j + 1) as f64);
                oracle += am * an * (m * n).powf(-sigma) * (-sigma * (n / m).ln().abs()).exp();
            }
        }
        oracle /= 2.0 * sigma;
        prop_assert!((r.lhs - oracle).abs() <= 1e-11 * r.lhs.abs().max(1.0));
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn zero_q_surrogate_is_one(theta in -0.9f64..2.0, w in 1.0f64..20.0, alpha in 1.0f64..3.0) {
        let r = surrogate_integral_moment(&SurrogateConfig { theta, w, alpha, q: 0.0, n_fields: 200, seed: Seed(1) }).unwrap();
        prop_assert_eq!(r.contribution.mean, 1.0);
        prop_assert_eq!(r.predicted(), 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prime_kernel_covariance_is_psd(n in 2usize..96, y in 1.5f64..500.0, span in 10.0f64..400.0, scale in 5.0f64..30.0) {
        let p_max = (y * span).min(200_000.0);
        let cov = covariance_matrix(n, &CovarianceSource::PrimeWindow { y, p_max, scale }, table()).unwrap();
        prop_assert_eq!(&cov, &cov.transpose());
        let smallest = nalgebra::SymmetricEigen::new(cov.clone()).eigenvalues.min();
        prop_assert!(smallest >= -1e-8 * cov.trace(), "smallest eigenvalue {}", smallest);
    }

    #[test]
    fn power_means_increase_on_shared_samples(alpha in 1.0f64..2.0, q1 in 0.05f64..1.0, dq in 0.0f64..1.0, seed in any::<u64>()) {
        let q2 = q1 + dq;
        let est = pseudomoment_mc_multi(200, alpha, &[q1, q2], 64, Seed(seed), table()).unwrap();
        let m1 = est[0].mean.powf(1.0 / (2.0 * q1));
        let m2 = est[1].mean.powf(1.0 / (2.0 * q2));
        prop_assert!(m1 <= m2 * (1.0 + 1e-12), "{} > {}", m1, m2);
    }
}
