/// Outcome of comparing two independently computed quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(lhs: f64, rhs: f64, pass: bool) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / lhs.abs().max(rhs.abs()).max(1e-300);
        CheckReport { lhs, rhs, abs_err, rel_err, pass }
    }

    /// Passes when `rel_err ≤ tol`.
    pub fn relative(lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::new(lhs, rhs, false);
        r.pass = r.rel_err <= tol;
        r
    }

    /// Passes when `abs_err ≤ tol`.
    pub fn absolute(lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::new(lhs, rhs, false);
        r.pass = r.abs_err <= tol;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_fields() {
        let r = CheckReport::relative(1.0, 1.5, 0.4);
        assert_eq!(r.abs_err, 0.5);
        assert!((r.rel_err - 1.0 / 3.0).abs() < 1e-16);
        assert!(r.pass);
        let z = CheckReport::absolute(0.0, 0.0, 0.0);
        assert_eq!((z.abs_err, z.rel_err, z.pass), (0.0, 0.0, true));
    }
}
