use super::CheckReport;
use crate::error::{Error, Result};
use crate::quad::{graded_breaks, integrate_panels};
use crate::stats::NeumaierSum;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Both sides of
/// `∫_0^∞ |Σ_{n≤x} a_n|² x^{−1−2σ} dx = (1/2π) ∫_ℝ |A(σ+it)/(σ+it)|² dt`
/// for a finite sequence `a_1..a_N`.
///
/// The left side is exact: the partial sum is a step function. The right
/// side is composite Gauss–Legendre on `[0, T]` applied to the even part
/// of the integrand, plus a tail: the diagonal part `Σ|a_n|²n^{−2σ}/(σ²+t²)` integrates in
/// closed form, and each cross term `cos(ωt)/(σ²+t²)` by two integrations
/// by parts. `T` is chosen so the remaining bound is below `quad_tol/10`
/// relative to the diagonal mass. Passes when `rel_err ≤ quad_tol`.
pub fn plancherel_check(coeffs: &[Complex64], sigma: f64, quad_tol: f64) -> Result<CheckReport> {
    if coeffs.is_empty() {
        return Err(Error::Domain("need at least one coefficient".into()));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::Domain(format!("quad_tol must be positive, got {quad_tol}")));
    }
    let lhs = step_integral(coeffs, sigma);
    let rhs = spectral_integral(coeffs, sigma, quad_tol);
    Ok(CheckReport::relative(lhs, rhs, quad_tol))
}

fn step_integral(coeffs: &[Complex64], sigma: f64) -> f64 {
    let n_max = coeffs.len();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut acc = NeumaierSum::new();
    for (i, a) in coeffs.iter().enumerate() {
        let n = (i + 1) as f64;
        partial += a;
        let head = n.powf(-2.0 * sigma);
        // ∫_n^{n+1} x^{−1−2σ} dx = n^{−2σ}(1 − (1+1/n)^{−2σ})/(2σ)
        let mass = if i + 1 == n_max { head } else { -head * (-2.0 * sigma * (1.0 / n).ln_1p()).exp_m1() };
        acc.add(partial.norm_sqr() * mass / (2.0 * sigma));
    }
    acc.total()
}

struct CrossTerm {
    re_c: f64,
    omega: f64,
}

fn spectral_integral(coeffs: &[Complex64], sigma: f64, quad_tol: f64) -> f64 {
    let logs: Vec<f64> = (1..=coeffs.len()).map(|n| (n as f64).ln()).collect();
    let b: Vec<Complex64> = coeffs.iter().zip(&logs).map(|(a, l)| a * (-sigma * l).exp()).collect();
    let diag: f64 = b.iter().map(|v| v.norm_sqr()).sum();
    let mut cross = Vec::new();
    for m in 0..b.len() {
        for n in m + 1..b.len() {
            let re_c = (b[m] * b[n].conj()).re;
            if re_c != 0.0 {
                cross.push(CrossTerm { re_c, omega: logs[n] - logs[m] });
            }
        }
    }
    let scale: f64 = cross.iter().map(|c| c.re_c.abs() / (c.omega * c.omega)).sum();
    let omega_max = cross.iter().map(|c| c.omega).fold(0.0, f64::max);

    // remainder after the two-term tail: (1/π) Σ 2|Re c| |g'(T)|/ω² ≤ (4/π)·scale/T³
    let target = quad_tol / 10.0 * diag / (2.0 * sigma);
    let t_max = (4.0 * scale / (PI * target)).cbrt().max(10.0 * sigma).max(10.0);

    let max_width = if omega_max > 0.0 { PI / omega_max } else { f64::INFINITY };
    let breaks = graded_breaks(0.0, t_max, |t| (0.5 * sigma.max(t)).min(max_width));
    // even part of |A(σ+it)|², so that [0, T] may be doubled
    let body = integrate_panels(&breaks, |t| {
        let mut plus = Complex64::new(0.0, 0.0);
        let mut minus = Complex64::new(0.0, 0.0);
        for (v, l) in b.iter().zip(&logs) {
            let (s, c) = (t * l).sin_cos();
            plus += v * Complex64::new(c, -s);
            minus += v * Complex64::new(c, s);
        }
        0.5 * (plus.norm_sqr() + minus.norm_sqr()) / (sigma * sigma + t * t)
    });

    let g = 1.0 / (sigma * sigma + t_max * t_max);
    let dg = -2.0 * t_max * g * g;
    let mut tail = NeumaierSum::new();
    tail.add(diag * (sigma / t_max).atan() / sigma);
    for c in &cross {
        let (s, co) = (c.omega * t_max).sin_cos();
        tail.add(2.0 * c.re_c * (-s * g / c.omega - co * dg / (c.omega * c.omega)));
    }
    (body + tail.total()) / PI
}
