//! Per-kind configuration files. Every kind has a flat TOML key set and
//! unknown keys are rejected. Keys documented as lists also accept a
//! single value.

use crate::error::{RunError, RunResult};
use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Pseudomoment,
    EulerMoment,
    TwoPoint,
    Plancherel,
    Ntr1,
    Rankin,
    CosIntegral,
    FieldSim,
    RegimeScan,
    SurrogateScan,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pseudomoment => "pseudomoment",
            Kind::EulerMoment => "euler-moment",
            Kind::TwoPoint => "two-point",
            Kind::Plancherel => "plancherel",
            Kind::Ntr1 => "ntr1",
            Kind::Rankin => "rankin",
            Kind::CosIntegral => "cos-integral",
            Kind::FieldSim => "field-sim",
            Kind::RegimeScan => "regime-scan",
            Kind::SurrogateScan => "surrogate-scan",
        }
    }

    pub fn all() -> [Kind; 10] {
        [
            Kind::Pseudomoment,
            Kind::EulerMoment,
            Kind::TwoPoint,
            Kind::Plancherel,
            Kind::Ntr1,
            Kind::Rankin,
            Kind::CosIntegral,
            Kind::FieldSim,
            Kind::RegimeScan,
            Kind::SurrogateScan,
        ]
    }

    /// Whether runs of this kind consume random numbers.
    pub fn is_random(self) -> bool {
        !matches!(self, Kind::Plancherel | Kind::Rankin | Kind::CosIntegral)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn one_or_many<'de, D, T>(de: D) -> Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(v) => vec![v],
        OneOrMany::Many(v) => v,
    })
}

fn default_sigma() -> f64 {
    0.0
}
fn default_width() -> f64 {
    1.0
}
fn default_grid_density() -> u32 {
    psmom_core::moments::DEFAULT_GRID_DENSITY
}
fn default_delta() -> f64 {
    0.5
}
fn default_cap() -> f64 {
    1e6
}
fn default_band() -> f64 {
    20.0
}
fn default_cos_tol() -> f64 {
    0.05
}
fn default_fields() -> usize {
    psmom_core::surrogate::MIN_FIELDS
}

/// `E|Σ_{n≤x} d_α(n) f(n)/√n|^{2q}`; one row per `(x, α, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudomomentConfig {
    #[serde(deserialize_with = "one_or_many")]
    pub x: Vec<u64>,
    #[serde(deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub q: Vec<f64>,
    pub n_samples: usize,
    pub seed: Option<u64>,
}

/// Integral moments over `[T, T(1+width)]` on the window `(3/2, x^{e^{−k}}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerMomentConfig {
    pub x: f64,
    #[serde(default)]
    pub k: u32,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub q: Vec<f64>,
    #[serde(rename = "T", deserialize_with = "one_or_many")]
    pub t: Vec<f64>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_grid_density")]
    pub grid_density: u32,
    pub n_samples: usize,
    pub seed: Option<u64>,
}

/// Dyadic ladder `T_j = 2^j · 2(k+1)/log x`, `j < levels`, for every `(α, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeScanConfig {
    pub x: f64,
    #[serde(default)]
    pub k: u32,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub q: Vec<f64>,
    pub levels: usize,
    #[serde(default = "default_grid_density")]
    pub grid_density: u32,
    pub n_samples: usize,
    pub seed: Option<u64>,
}

/// `E|G(t)|^b |G(0)|^c` on `(y, z]`; one row per `(t, b, c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPointConfig {
    pub y: f64,
    pub z: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(deserialize_with = "one_or_many")]
    pub t: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub b: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub c: Vec<f64>,
    pub n_samples: usize,
    pub seed: Option<u64>,
}

/// Coefficients are either listed (`coeffs`, optional `coeffs_im`) or
/// `d_α(n)` for `n ≤ n_terms` (`divisor_alpha`, `n_terms`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlancherelConfig {
    pub coeffs: Option<Vec<f64>>,
    pub coeffs_im: Option<Vec<f64>>,
    pub divisor_alpha: Option<f64>,
    pub n_terms: Option<usize>,
    #[serde(deserialize_with = "one_or_many")]
    pub sigma: Vec<f64>,
    pub quad_tol: f64,
}

/// Explicit `cases = [[u, v, y, z, alpha], ...]` followed by `count`
/// random admissible tuples. Rows report `lhs = ratio`, `rhs = band`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ntr1Config {
    #[serde(default)]
    pub cases: Vec<[f64; 5]>,
    #[serde(default)]
    pub count: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_cap")]
    pub cap: f64,
    #[serde(default = "default_band")]
    pub band: f64,
    pub seed: Option<u64>,
}

/// `cases = [[x, y, alpha, C, H], ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankinConfig {
    pub cases: Vec<[f64; 5]>,
}

/// `cases = [[y, z, t], ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosIntegralConfig {
    pub cases: Vec<[f64; 3]>,
    #[serde(default = "default_cos_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSource {
    Iid,
    PrimeWindow,
    Constant,
}

/// Correlated or iid fields. `iid` and `constant` take `variance`;
/// `prime-window` takes `y`, `p_max` and `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSimConfig {
    pub source: FieldSource,
    pub variance: Option<f64>,
    pub y: Option<f64>,
    pub p_max: Option<f64>,
    pub scale: Option<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub n_points: Vec<usize>,
    pub alpha: f64,
    pub q: f64,
    #[serde(default = "default_fields")]
    pub n_fields: usize,
    pub seed: Option<u64>,
}

/// Surrogate contribution on a `θ` grid for every `(α, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurrogateScanConfig {
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub q: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub theta: Vec<f64>,
    #[serde(default = "default_fields")]
    pub n_fields: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentConfig {
    Pseudomoment(PseudomomentConfig),
    EulerMoment(EulerMomentConfig),
    TwoPoint(TwoPointConfig),
    Plancherel(PlancherelConfig),
    Ntr1(Ntr1Config),
    Rankin(RankinConfig),
    CosIntegral(CosIntegralConfig),
    FieldSim(FieldSimConfig),
    RegimeScan(RegimeScanConfig),
    SurrogateScan(SurrogateScanConfig),
}

impl ExperimentConfig {
    pub fn parse(kind: Kind, text: &str) -> RunResult<Self> {
        let config = match kind {
            Kind::Pseudomoment => ExperimentConfig::Pseudomoment(from_toml(text)?),
            Kind::EulerMoment => ExperimentConfig::EulerMoment(from_toml(text)?),
            Kind::TwoPoint => ExperimentConfig::TwoPoint(from_toml(text)?),
            Kind::Plancherel => ExperimentConfig::Plancherel(from_toml(text)?),
            Kind::Ntr1 => ExperimentConfig::Ntr1(from_toml(text)?),
            Kind::Rankin => ExperimentConfig::Rankin(from_toml(text)?),
            Kind::CosIntegral => ExperimentConfig::CosIntegral(from_toml(text)?),
            Kind::FieldSim => ExperimentConfig::FieldSim(from_toml(text)?),
            Kind::RegimeScan => ExperimentConfig::RegimeScan(from_toml(text)?),
            Kind::SurrogateScan => ExperimentConfig::SurrogateScan(from_toml(text)?),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn kind(&self) -> Kind {
        match self {
            ExperimentConfig::Pseudomoment(_) => Kind::Pseudomoment,
            ExperimentConfig::EulerMoment(_) => Kind::EulerMoment,
            ExperimentConfig::TwoPoint(_) => Kind::TwoPoint,
            ExperimentConfig::Plancherel(_) => Kind::Plancherel,
            ExperimentConfig::Ntr1(_) => Kind::Ntr1,
            ExperimentConfig::Rankin(_) => Kind::Rankin,
            ExperimentConfig::CosIntegral(_) => Kind::CosIntegral,
            ExperimentConfig::FieldSim(_) => Kind::FieldSim,
            ExperimentConfig::RegimeScan(_) => Kind::RegimeScan,
            ExperimentConfig::SurrogateScan(_) => Kind::SurrogateScan,
        }
    }

    fn seed_slot(&mut self) -> Option<&mut Option<u64>> {
        match self {
            ExperimentConfig::Pseudomoment(c) => Some(&mut c.seed),
            ExperimentConfig::EulerMoment(c) => Some(&mut c.seed),
            ExperimentConfig::TwoPoint(c) => Some(&mut c.seed),
            ExperimentConfig::Ntr1(c) => Some(&mut c.seed),
            ExperimentConfig::FieldSim(c) => Some(&mut c.seed),
            ExperimentConfig::RegimeScan(c) => Some(&mut c.seed),
            ExperimentConfig::SurrogateScan(c) => Some(&mut c.seed),
            ExperimentConfig::Plancherel(_) | ExperimentConfig::Rankin(_) | ExperimentConfig::CosIntegral(_) => None,
        }
    }

    /// The configured seed, or `fallback()` written back into the config
    /// so that the echo in the manifest reproduces the run.
    pub fn resolve_seed(&mut self, fallback: impl FnOnce() -> u64) -> Option<u64> {
        let slot = self.seed_slot()?;
        Some(*slot.get_or_insert_with(fallback))
    }

    fn validate(&self) -> RunResult<()> {
        fn non_empty<T>(key: &str, v: &[T]) -> RunResult<()> {
            if v.is_empty() {
                return Err(RunError::schema(key, "list must not be empty"));
            }
            Ok(())
        }
        fn positive(key: &str, v: usize) -> RunResult<()> {
            if v == 0 {
                return Err(RunError::schema(key, "must be positive"));
            }
            Ok(())
        }
        match self {
            ExperimentConfig::Pseudomoment(c) => {
                non_empty("x", &c.x)?;
                non_empty("alpha", &c.alpha)?;
                non_empty("q", &c.q)?;
                positive("n_samples", c.n_samples)
            }
            ExperimentConfig::EulerMoment(c) => {
                non_empty("alpha", &c.alpha)?;
                non_empty("q", &c.q)?;
                non_empty("T", &c.t)?;
                positive("n_samples", c.n_samples)
            }
            ExperimentConfig::RegimeScan(c) => {
                non_empty("alpha", &c.alpha)?;
                non_empty("q", &c.q)?;
                positive("levels", c.levels)?;
                positive("n_samples", c.n_samples)
            }
            ExperimentConfig::TwoPoint(c) => {
                non_empty("t", &c.t)?;
                non_empty("b", &c.b)?;
                non_empty("c", &c.c)?;
                positive("n_samples", c.n_samples)
            }
            ExperimentConfig::Plancherel(c) => {
                non_empty("sigma", &c.sigma)?;
                match (&c.coeffs, c.divisor_alpha, c.n_terms) {
                    (Some(re), None, None) => {
                        non_empty("coeffs", re)?;
                        if let Some(im) = &c.coeffs_im {
                            if im.len() != re.len() {
                                return Err(RunError::schema("coeffs_im", "length differs from coeffs"));
                            }
                        }
                        Ok(())
                    }
                    (None, Some(_), Some(n)) => {
                        if c.coeffs_im.is_some() {
                            return Err(RunError::schema("coeffs_im", "only allowed together with coeffs"));
                        }
                        positive("n_terms", n)
                    }
                    (None, Some(_), None) => Err(RunError::schema("n_terms", "required with divisor_alpha")),
                    (None, None, Some(_)) => Err(RunError::schema("divisor_alpha", "required with n_terms")),
                    (None, None, None) => Err(RunError::schema("coeffs", "give coeffs or divisor_alpha")),
                    (Some(_), _, _) => Err(RunError::schema("divisor_alpha", "not allowed together with coeffs")),
                }
            }
            ExperimentConfig::Ntr1(c) => {
                if c.cases.is_empty() && c.count == 0 {
                    return Err(RunError::schema("count", "no cases and no random tuples requested"));
                }
                Ok(())
            }
            ExperimentConfig::Rankin(c) => non_empty("cases", &c.cases),
            ExperimentConfig::CosIntegral(c) => non_empty("cases", &c.cases),
            ExperimentConfig::FieldSim(c) => {
                non_empty("n_points", &c.n_points)?;
                positive("n_fields", c.n_fields)?;
                let has = [("variance", c.variance.is_some()), ("y", c.y.is_some()), ("p_max", c.p_max.is_some()), ("scale", c.scale.is_some())];
                let wanted: &[&str] = match c.source {
                    FieldSource::Iid | FieldSource::Constant => &["variance"],
                    FieldSource::PrimeWindow => &["y", "p_max", "scale"],
                };
                for (key, present) in has {
                    match (wanted.contains(&key), present) {
                        (true, false) => return Err(RunError::schema(key, format!("required for source {:?}", c.source))),
                        (false, true) => return Err(RunError::schema(key, format!("not used by source {:?}", c.source))),
                        _ => {}
                    }
                }
                Ok(())
            }
            ExperimentConfig::SurrogateScan(c) => {
                non_empty("alpha", &c.alpha)?;
                non_empty("q", &c.q)?;
                non_empty("theta", &c.theta)?;
                positive("n_fields", c.n_fields)
            }
        }
    }
}

fn from_toml<T: DeserializeOwned>(text: &str) -> RunResult<T> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        RunError::schema(offending_key(text, &e).unwrap_or_else(|| "<document>".into()), message)
    })
}

/// The key named in backticks by serde, or else the key on the line the
/// error points at.
fn offending_key(text: &str, e: &toml::de::Error) -> Option<String> {
    let msg = e.message();
    if let Some(start) = msg.find('`') {
        if let Some(len) = msg[start + 1..].find('`') {
            return Some(msg[start + 1..start + 1 + len].to_string());
        }
    }
    let span = e.span()?;
    let line_start = text[..span.start].rfind('\n').map_or(0, |i| i + 1);
    let line = text[line_start..].lines().next()?;
    let key = line.split('=').next()?.trim();
    (!key.is_empty()).then(|| key.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_named() {
        let err = ExperimentConfig::parse(Kind::Pseudomoment, "x = 10\nalpah = 1\nq = 1\nn_samples = 3\n").unwrap_err();
        match err {
            RunError::Schema { key, .. } => assert_eq!(key, "alpah"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_type_names_key() {
        let err = ExperimentConfig::parse(Kind::Rankin, "cases = \"none\"\n").unwrap_err();
        match err {
            RunError::Schema { key, .. } => assert_eq!(key, "cases"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalars_promote_to_lists() {
        let c = ExperimentConfig::parse(Kind::Pseudomoment, "x = 10\nalpha = [1, 1.5]\nq = 0.5\nn_samples = 3\n").unwrap();
        match c {
            ExperimentConfig::Pseudomoment(p) => {
                assert_eq!((p.x, p.alpha, p.q), (vec![10], vec![1.0, 1.5], vec![0.5]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_source_keys() {
        let err = ExperimentConfig::parse(Kind::FieldSim, "source = \"iid\"\nn_points = 10\nalpha = 1\nq = 0.1\n").unwrap_err();
        assert!(matches!(err, RunError::Schema { ref key, .. } if key == "variance"), "{err}");
        let err = ExperimentConfig::parse(
            Kind::FieldSim,
            "source = \"iid\"\nvariance = 1\ny = 3\nn_points = 10\nalpha = 1\nq = 0.1\n",
        )
        .unwrap_err();
        assert!(matches!(err, RunError::Schema { ref key, .. } if key == "y"), "{err}");
    }

    #[test]
    fn seed_is_written_back() {
        let mut c = ExperimentConfig::parse(Kind::SurrogateScan, "W = 5\nalpha = 2\nq = 0.2\ntheta = 0\n").unwrap();
        assert_eq!(c.resolve_seed(|| 17), Some(17));
        assert_eq!(c.resolve_seed(|| 18), Some(17));
        let mut c = ExperimentConfig::parse(Kind::CosIntegral, "cases = [[100, 1000, 0]]\n").unwrap();
        assert_eq!(c.resolve_seed(|| 17), None);
    }
}
