//! Composite Gauss–Legendre quadrature on explicit panels.

use crate::stats::NeumaierSum;
use gauss_quad::legendre::GaussLegendre;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

pub const GL_POINTS: usize = 20;

/// Shared 20-point rule on `[-1, 1]`.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(GL_POINTS).expect("nonzero")))
}

/// Integrate `f` over consecutive panels `[b_0, b_1], [b_1, b_2], …`.
pub fn integrate_panels<F: FnMut(f64) -> f64>(breaks: &[f64], mut f: F) -> f64 {
    let gl = rule();
    let mut acc = NeumaierSum::new();
    for w in breaks.windows(2) {
        acc.add(gl.integrate(w[0], w[1], &mut f));
    }
    acc.total()
}

/// Panel breakpoints on `[a, b]` with local width at most `width(u)`.
pub fn graded_breaks<W: Fn(f64) -> f64>(a: f64, b: f64, width: W) -> Vec<f64> {
    let mut breaks = vec![a];
    let mut u = a;
    while u < b {
        let h = width(u);
        assert!(h > 0.0, "panel width must be positive at {u}");
        u = (u + h).min(b);
        breaks.push(u);
    }
    breaks
}

/// `∫_a^b cos(u)/u du` for `0 < a ≤ b`.
pub fn cos_over_u(a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && a <= b, "need 0 < a <= b, got [{a}, {b}]");
    let breaks = graded_breaks(a, b, |u| (0.5 * u).min(1.0));
    integrate_panels(&breaks, |u| u.cos() / u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let v = integrate_panels(&[0.0, 0.5, 2.0], |x| x.powi(7) - 3.0 * x);
        assert!((v - (2f64.powi(8) / 8.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn cosine_integral_values() {
        // Ci(2) − Ci(1) and Ci(10) − Ci(0.01), reference values of the cosine integral
        let ci = |x: f64| match x {
            0.01 => -4.027_979_520_982_392,
            1.0 => 0.337_403_922_900_968_1,
            2.0 => 0.422_980_828_774_865,
            10.0 => -0.045_456_433_004_455_37,
            _ => unreachable!(),
        };
        assert!((cos_over_u(1.0, 2.0) - (ci(2.0) - ci(1.0))).abs() < 1e-13);
        assert!((cos_over_u(0.01, 10.0) - (ci(10.0) - ci(0.01))).abs() < 1e-12);
        assert_eq!(cos_over_u(3.0, 3.0), 0.0);
    }
}
