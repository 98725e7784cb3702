use crate::error::{Error, Result};
use std::fmt;

/// The four `(α, q)` regions with distinct pseudomoment asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SmallQLowAlpha,
    MidQ,
    LargeAlpha,
    LargeQ,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SmallQLowAlpha => "SMALL_Q_LOW_ALPHA",
            Regime::MidQ => "MID_Q",
            Regime::LargeAlpha => "LARGE_ALPHA",
            Regime::LargeQ => "LARGE_Q",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Predicted power of `log x` in `Ψ_{2q,α}(x)` and the `θ` such that the
/// dominant contribution comes from `t ≈ (log x)^θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePrediction {
    pub exponent: f64,
    pub theta: Option<f64>,
    pub regime: Regime,
    /// `q = 2(α−1)/α²` with `1 ≤ α < 2`, where `log log x` corrections change.
    pub boundary: bool,
}

/// `2(α−1)/α²`, the `q` at which the first two rows meet.
pub fn low_alpha_threshold(alpha: f64) -> f64 {
    2.0 * (alpha - 1.0) / (alpha * alpha)
}

/// The threshold itself belongs to the first row.
pub fn predict_regime(alpha: f64, q: f64) -> Result<RegimePrediction> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    let qa2 = (q * alpha).powi(2);
    if q >= 0.5 {
        return Ok(RegimePrediction { exponent: qa2, theta: None, regime: Regime::LargeQ, boundary: false });
    }
    if alpha >= 2.0 {
        return Ok(RegimePrediction {
            exponent: q * alpha * alpha / 2.0,
            theta: Some(alpha * alpha / 4.0 - 1.0),
            regime: Regime::LargeAlpha,
            boundary: false,
        });
    }
    let threshold = low_alpha_threshold(alpha);
    let boundary = (q - threshold).abs() <= 1e-12 * threshold;
    if q <= threshold || boundary {
        Ok(RegimePrediction {
            exponent: 2.0 * (alpha - 1.0) * q,
            theta: Some(0.0),
            regime: Regime::SmallQLowAlpha,
            boundary,
        })
    } else {
        Ok(RegimePrediction { exponent: qa2, theta: Some(-1.0), regime: Regime::MidQ, boundary: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let r = predict_regime(1.5, 0.1).unwrap();
        assert_eq!((r.regime, r.theta, r.boundary), (Regime::SmallQLowAlpha, Some(0.0), false));
        assert!((r.exponent - 0.1).abs() < 1e-15);
        let r = predict_regime(1.0, 0.3).unwrap();
        assert_eq!((r.regime, r.theta), (Regime::MidQ, Some(-1.0)));
        assert!((r.exponent - 0.09).abs() < 1e-15);
        let r = predict_regime(3.0, 0.2).unwrap();
        assert_eq!((r.regime, r.theta), (Regime::LargeAlpha, Some(1.25)));
        assert!((r.exponent - 0.9).abs() < 1e-15);
        let r = predict_regime(1.2, 0.7).unwrap();
        assert_eq!((r.regime, r.theta), (Regime::LargeQ, None));
        assert!((r.exponent - 0.7056).abs() < 1e-15);
    }

    #[test]
    fn boundary_flag() {
        for alpha in [1.1, 1.25, 1.5, 1.9] {
            let q = low_alpha_threshold(alpha);
            let r = predict_regime(alpha, q).unwrap();
            assert!(r.boundary);
            assert!((r.exponent - (q * alpha).powi(2)).abs() < 1e-15);
            assert!(!predict_regime(alpha, q * 0.99).unwrap().boundary);
            assert!(!predict_regime(alpha, q * 1.01).unwrap().boundary);
        }
        // the row is empty for α = 1
        assert!(!predict_regime(1.0, 1e-9).unwrap().boundary);
    }

    fn formula(regime: Regime, alpha: f64, q: f64) -> f64 {
        match regime {
            Regime::SmallQLowAlpha => 2.0 * (alpha - 1.0) * q,
            Regime::MidQ | Regime::LargeQ => (q * alpha).powi(2),
            Regime::LargeAlpha => q * alpha * alpha / 2.0,
        }
    }

    #[test]
    fn adjacent_formulas_agree_on_boundaries() {
        for i in 0..=40 {
            let alpha = 1.0 + i as f64 * 0.025;
            let q = low_alpha_threshold(alpha);
            if q > 0.0 {
                let a = formula(Regime::SmallQLowAlpha, alpha, q);
                assert!((a - formula(Regime::MidQ, alpha, q)).abs() <= 1e-14, "alpha={alpha}");
            }
            let a = formula(Regime::MidQ, alpha, 0.5);
            assert!((a - formula(Regime::LargeQ, alpha, 0.5)).abs() <= 1e-14);
        }
        for i in 0..=20 {
            let q = 0.025 * i as f64;
            assert!((formula(Regime::SmallQLowAlpha, 2.0, q) - formula(Regime::LargeAlpha, 2.0, q)).abs() <= 1e-15);
            let alpha = 2.0 + 0.1 * i as f64;
            assert!((formula(Regime::LargeAlpha, alpha, 0.5) - formula(Regime::LargeQ, alpha, 0.5)).abs() <= 1e-13);
        }
    }

    #[test]
    fn exponent_is_continuous_in_q() {
        for alpha in [1.0, 1.3, 1.7, 1.999, 2.0, 2.5, 3.0] {
            let mut prev = predict_regime(alpha, 1e-4).unwrap().exponent;
            for i in 2..=1000 {
                let q = 1e-4 * i as f64 * 0.8;
                let e = predict_regime(alpha, q).unwrap().exponent;
                assert!((e - prev).abs() < 1e-3 * alpha * alpha, "alpha={alpha} q={q}");
                prev = e;
            }
        }
    }

    #[test]
    fn domain() {
        assert!(predict_regime(0.9, 0.1).is_err());
        assert!(predict_regime(1.5, 0.0).is_err());
    }
}
