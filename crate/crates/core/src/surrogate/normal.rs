use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `Φ^{−1}(s)` for `0 < s < 1`, accurate in the lower tail.
pub fn normal_quantile(s: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * s)
}

/// `ln Φ(a)`, switching to the asymptotic series of the Mills ratio once
/// `erfc` would underflow.
pub fn ln_normal_cdf(a: f64) -> f64 {
    if a > -30.0 {
        return (0.5 * erfc(-a * FRAC_1_SQRT_2)).ln();
    }
    let r = 1.0 / (a * a);
    let series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    -0.5 * a * a - (-a).ln() - LN_SQRT_2PI + series.ln()
}
