use crate::config::*;
use crate::error::{RunError, RunResult};
use num_complex::Complex64;
use psmom_core::arith::{divisor_alpha_table, prime_reciprocal_sum, PrimeTable};
use psmom_core::checks::{
    admissible_ntr1_tuples, cos_integral_check, ntr1_ratio, plancherel_check, rankin_tail_check, CheckReport, Ntr1Params,
    RankinParams,
};
use psmom_core::moments::{
    estimator_for, log_integrals, moment_from_log_integrals, pseudomoment_mc_multi, two_point_moment_exact, two_point_moment_mc,
    IntegralMomentConfig,
};
use psmom_core::random::{EulerProductSpec, Seed};
use psmom_core::stats::MomentEstimate;
use psmom_core::surrogate::{
    predict_regime, simulate_field, surrogate_integral_moment, CovarianceSource, GaussianFieldConfig, SurrogateConfig,
};
use serde_json::json;

pub const PSEUDOMOMENT_HEADER: &[&str] = &["x", "alpha", "q", "n_samples", "mean", "stderr", "seed"];
pub const EULER_MOMENT_HEADER: &[&str] =
    &["T", "k", "sigma", "alpha", "q", "moment_mean", "moment_stderr", "contribution", "range_label"];
pub const TWO_POINT_HEADER: &[&str] =
    &["y", "z", "sigma", "t", "b", "c", "exact_main", "envelope", "mc_mean", "mc_stderr"];
pub const CHECK_HEADER: &[&str] = &["kind", "params_json", "lhs", "rhs", "abs_err", "rel_err", "pass"];
pub const SURROGATE_HEADER: &[&str] = &["theta", "W", "alpha", "q", "n_points", "sim_mean", "sim_stderr", "predicted"];
pub const REGIME_PREDICTION_HEADER: &[&str] = &["alpha", "q", "exponent", "theta", "regime", "boundary"];
pub const SAMPLING_HEADER: &[&str] =
    &["theta", "alpha", "q", "nominal_points", "sampled_points", "method", "log_contribution", "log_predicted"];
pub const FIELDS_HEADER: &[&str] = &["n_points", "field", "max", "argmax", "log_exp_sum"];

/// One output file, held in memory until written or digested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    name: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> RunResult<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).map_err(|e| csv_error(name, e))?;
        Ok(Table { name: name.to_string(), writer })
    }

    fn row(&mut self, fields: Vec<String>) -> RunResult<()> {
        let name = &self.name;
        self.writer.write_record(&fields).map_err(|e| csv_error(name, e))
    }

    fn finish(self) -> RunResult<OutputFile> {
        let name = self.name;
        let bytes = self.writer.into_inner().map_err(|e| RunError::io(&name, e.into_error()))?;
        Ok(OutputFile { name, bytes })
    }
}

fn csv_error(name: &str, e: csv::Error) -> RunError {
    RunError::io(name, std::io::Error::other(e))
}

fn table_to(limit: f64) -> RunResult<PrimeTable> {
    Ok(PrimeTable::new(limit.max(2.0).ceil() as u64)?)
}

/// Which of the three `T` ranges a dyadic block falls in:
/// `small-t` below `e^k/log x`, `large-t` above 1, `medium-t` between.
pub fn range_label(t: f64, k: u32, x: f64) -> &'static str {
    if t < (k as f64).exp() / x.ln() {
        "small-t"
    } else if t > 1.0 {
        "large-t"
    } else {
        "medium-t"
    }
}

pub fn execute(config: &ExperimentConfig, seed: Option<u64>) -> RunResult<Vec<OutputFile>> {
    let seed = Seed(seed.unwrap_or(0));
    match config {
        ExperimentConfig::Pseudomoment(c) => pseudomoment(c, seed),
        ExperimentConfig::EulerMoment(c) => {
            let rows = integral_rows(c.x, c.k, c.sigma, &c.alpha, &c.q, &c.t, c.width, c.grid_density, c.n_samples, seed)?;
            Ok(vec![rows])
        }
        ExperimentConfig::RegimeScan(c) => regime_scan(c, seed),
        ExperimentConfig::TwoPoint(c) => two_point(c, seed),
        ExperimentConfig::Plancherel(c) => plancherel(c),
        ExperimentConfig::Ntr1(c) => ntr1(c, seed),
        ExperimentConfig::Rankin(c) => rankin(c),
        ExperimentConfig::CosIntegral(c) => cos_integral(c),
        ExperimentConfig::FieldSim(c) => field_sim(c, seed),
        ExperimentConfig::SurrogateScan(c) => surrogate_scan(c, seed),
    }
}

fn pseudomoment(c: &PseudomomentConfig, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let max_x = c.x.iter().copied().max().unwrap_or(2);
    let table = table_to(max_x as f64)?;
    let mut out = Table::new("pseudomoment.csv", PSEUDOMOMENT_HEADER)?;
    for &x in &c.x {
        for &alpha in &c.alpha {
            let estimates = pseudomoment_mc_multi(x, alpha, &c.q, c.n_samples, seed, &table)?;
            for (q, est) in c.q.iter().zip(estimates) {
                out.row(vec![
                    x.to_string(),
                    fmt_f64(alpha),
                    fmt_f64(*q),
                    c.n_samples.to_string(),
                    fmt_f64(est.mean),
                    fmt_f64(est.stderr),
                    seed.0.to_string(),
                ])?;
            }
        }
    }
    Ok(vec![out.finish()?])
}

#[allow(clippy::too_many_arguments)]
fn integral_rows(
    x: f64,
    k: u32,
    sigma: f64,
    alphas: &[f64],
    qs: &[f64],
    ts: &[f64],
    width: f64,
    grid_density: u32,
    n_samples: usize,
    seed: Seed,
) -> RunResult<OutputFile> {
    let spec = EulerProductSpec::from_level(x, k, sigma)?;
    let table = table_to(spec.z())?;
    let mut out = Table::new("euler_moment.csv", EULER_MOMENT_HEADER)?;
    let log_x = x.ln();
    for &alpha in alphas {
        let logs = ts
            .iter()
            .map(|&t_scale| {
                let config = IntegralMomentConfig {
                    spec,
                    t_scale,
                    width,
                    alpha,
                    q: qs[0].max(0.0),
                    grid_points_per_unit_scale: grid_density,
                    n_samples,
                    seed,
                };
                log_integrals(&config, &table)
            })
            .collect::<psmom_core::Result<Vec<_>>>()?;
        for &q in qs {
            if !(q >= 0.0) {
                return Err(RunError::schema("q", format!("must be non-negative, got {q}")));
            }
            for (&t, l) in ts.iter().zip(&logs) {
                let est = moment_from_log_integrals(l, q, alpha)?;
                let contribution = (-q * log_x.ln() - 2.0 * q * t.ln()).exp() * est.mean;
                out.row(vec![
                    fmt_f64(t),
                    k.to_string(),
                    fmt_f64(sigma),
                    fmt_f64(alpha),
                    fmt_f64(q),
                    fmt_f64(est.mean),
                    fmt_f64(est.stderr),
                    fmt_f64(contribution),
                    range_label(t, k, x).to_string(),
                ])?;
            }
        }
    }
    out.finish()
}

/// `T_j = 2^j · 2(k+1)/log x`.
pub fn dyadic_ladder(x: f64, k: u32, levels: usize) -> Vec<f64> {
    let start = 2.0 * (k as f64 + 1.0) / x.ln();
    (0..levels).map(|j| start * 2f64.powi(j as i32)).collect()
}

fn regime_scan(c: &RegimeScanConfig, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let ladder = dyadic_ladder(c.x, c.k, c.levels);
    let mut rows = integral_rows(c.x, c.k, c.sigma, &c.alpha, &c.q, &ladder, 1.0, c.grid_density, c.n_samples, seed)?;
    rows.name = "regime_scan.csv".into();
    let mut pred = Table::new("regime_prediction.csv", REGIME_PREDICTION_HEADER)?;
    for &alpha in &c.alpha {
        for &q in &c.q {
            if q == 0.0 {
                pred.row(vec![fmt_f64(alpha), fmt_f64(q), fmt_f64(0.0), String::new(), String::new(), "false".into()])?;
                continue;
            }
            let r = predict_regime(alpha, q)?;
            pred.row(vec![
                fmt_f64(alpha),
                fmt_f64(q),
                fmt_f64(r.exponent),
                r.theta.map(fmt_f64).unwrap_or_default(),
                r.regime.to_string(),
                r.boundary.to_string(),
            ])?;
        }
    }
    Ok(vec![rows, pred.finish()?])
}

fn two_point(c: &TwoPointConfig, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let spec = EulerProductSpec::new(c.y, c.z, c.sigma)?;
    let table = table_to(c.z)?;
    let mut out = Table::new("two_point.csv", TWO_POINT_HEADER)?;
    for &t in &c.t {
        for &b in &c.b {
            for &cc in &c.c {
                let exact = two_point_moment_exact(&spec, t, b, cc, &table)?;
                let mc = two_point_moment_mc(&spec, t, b, cc, c.n_samples, seed, &table)?;
                out.row(vec![
                    fmt_f64(c.y),
                    fmt_f64(c.z),
                    fmt_f64(c.sigma),
                    fmt_f64(t),
                    fmt_f64(b),
                    fmt_f64(cc),
                    fmt_f64(exact.main),
                    fmt_f64(exact.envelope),
                    fmt_f64(mc.mean),
                    fmt_f64(mc.stderr),
                ])?;
            }
        }
    }
    Ok(vec![out.finish()?])
}

fn check_row(out: &mut Table, kind: &str, params: serde_json::Value, r: &CheckReport) -> RunResult<()> {
    out.row(vec![
        kind.to_string(),
        params.to_string(),
        fmt_f64(r.lhs),
        fmt_f64(r.rhs),
        fmt_f64(r.abs_err),
        fmt_f64(r.rel_err),
        r.pass.to_string(),
    ])
}

fn plancherel(c: &PlancherelConfig) -> RunResult<Vec<OutputFile>> {
    let (coeffs, params) = match (&c.coeffs, c.divisor_alpha, c.n_terms) {
        (Some(re), _, _) => {
            let im = c.coeffs_im.clone().unwrap_or_else(|| vec![0.0; re.len()]);
            let a: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
            (a, json!({ "coeffs": re, "coeffs_im": c.coeffs_im }))
        }
        (None, Some(alpha), Some(n)) => {
            let table = table_to(n as f64)?;
            let d = divisor_alpha_table(n as u64, alpha, &table)?;
            (d[1..].iter().map(|&v| Complex64::new(v, 0.0)).collect(), json!({ "divisor_alpha": alpha, "n_terms": n }))
        }
        _ => return Err(RunError::schema("coeffs", "give coeffs or divisor_alpha with n_terms")),
    };
    let mut out = Table::new("checks.csv", CHECK_HEADER)?;
    for &sigma in &c.sigma {
        let r = plancherel_check(&coeffs, sigma, c.quad_tol)?;
        let mut p = params.clone();
        p["sigma"] = json!(sigma);
        p["quad_tol"] = json!(c.quad_tol);
        check_row(&mut out, "plancherel", p, &r)?;
    }
    Ok(vec![out.finish()?])
}

fn ntr1(c: &Ntr1Config, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let mut tuples: Vec<Ntr1Params> = c
        .cases
        .iter()
        .map(|&[u, v, y, z, alpha]| Ntr1Params { u, v, y, z, alpha, delta: c.delta })
        .collect();
    tuples.extend(admissible_ntr1_tuples(c.count, c.delta, c.cap, seed));
    let z_max = tuples.iter().map(|p| p.z).fold(2.0, f64::max);
    let table = table_to(z_max)?;
    let mut out = Table::new("checks.csv", CHECK_HEADER)?;
    for p in &tuples {
        let ratio = ntr1_ratio(p, &table)?;
        let r = CheckReport::new(ratio, c.band, (0.0..=c.band).contains(&ratio));
        let params = json!({ "u": p.u, "v": p.v, "y": p.y, "z": p.z, "alpha": p.alpha, "delta": p.delta });
        check_row(&mut out, "ntr1", params, &r)?;
    }
    Ok(vec![out.finish()?])
}

fn rankin(c: &RankinConfig) -> RunResult<Vec<OutputFile>> {
    let y_max = c.cases.iter().map(|v| v[1]).fold(2.0, f64::max);
    let table = table_to(y_max)?;
    let mut out = Table::new("checks.csv", CHECK_HEADER)?;
    for &[x, y, alpha, cc, horizon] in &c.cases {
        let r = rankin_tail_check(&RankinParams { x, y, alpha, c: cc, horizon }, &table)?;
        check_row(&mut out, "rankin", json!({ "x": x, "y": y, "alpha": alpha, "C": cc, "H": horizon }), &r)?;
    }
    Ok(vec![out.finish()?])
}

fn cos_integral(c: &CosIntegralConfig) -> RunResult<Vec<OutputFile>> {
    let z_max = c.cases.iter().map(|v| v[1]).fold(2.0, f64::max);
    let table = table_to(z_max)?;
    let mut out = Table::new("checks.csv", CHECK_HEADER)?;
    for &[y, z, t] in &c.cases {
        let r = cos_integral_check(y, z, t, c.tol, &table)?;
        check_row(&mut out, "cos-integral", json!({ "y": y, "z": z, "t": t, "tol": c.tol }), &r)?;
    }
    Ok(vec![out.finish()?])
}

/// `n^{−2q}·E[(Σ e^{2αX})^q]`, computed with a common shift so that `q = 0` is exactly 1.
fn scaled_power_mean(log_sums: &[f64], q: f64, log_prefactor: f64, alpha: f64) -> MomentEstimate {
    let shift = q * log_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_sums.iter().map(|l| (q * l - shift).exp()).collect();
    let est = MomentEstimate::from_samples(&scaled, estimator_for(q, alpha));
    let factor = (log_prefactor + shift).exp();
    MomentEstimate { mean: est.mean * factor, stderr: est.stderr * factor, ..est }
}

fn field_sim(c: &FieldSimConfig, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let missing = |key: &str| RunError::schema(key, "missing");
    let table = match c.source {
        FieldSource::PrimeWindow => table_to(c.p_max.ok_or_else(|| missing("p_max"))?)?,
        _ => table_to(2.0)?,
    };
    let mut out = Table::new("field_sim.csv", SURROGATE_HEADER)?;
    let mut fields = Table::new("fields.csv", FIELDS_HEADER)?;
    for &n in &c.n_points {
        let (source, variance) = match c.source {
            FieldSource::Iid => {
                let v = c.variance.ok_or_else(|| missing("variance"))?;
                (CovarianceSource::Iid { variance: v }, v)
            }
            FieldSource::Constant => {
                let v = c.variance.ok_or_else(|| missing("variance"))?;
                (CovarianceSource::Toeplitz { lags: vec![v; n] }, v)
            }
            FieldSource::PrimeWindow => {
                let y = c.y.ok_or_else(|| missing("y"))?;
                let p_max = c.p_max.ok_or_else(|| missing("p_max"))?;
                let scale = c.scale.ok_or_else(|| missing("scale"))?;
                (CovarianceSource::PrimeWindow { y, p_max, scale }, 0.5 * prime_reciprocal_sum(y, p_max, 1.0, &table)?)
            }
        };
        let summaries = simulate_field(&GaussianFieldConfig { n_points: n, source, seed }, c.n_fields, c.alpha, &table)?;
        for (i, s) in summaries.iter().enumerate() {
            fields.row(vec![n.to_string(), i.to_string(), fmt_f64(s.max), s.argmax.to_string(), fmt_f64(s.log_exp_sum)])?;
        }
        let log_n = (n as f64).ln();
        let w = 2.0 * variance;
        let log_sums: Vec<f64> = summaries.iter().map(|s| s.log_exp_sum).collect();
        let est = scaled_power_mean(&log_sums, c.q, -2.0 * c.q * log_n, c.alpha);
        let predicted = (2.0 * c.alpha * c.q * (2.0 * variance * log_n).sqrt() - 2.0 * c.q * log_n).exp();
        out.row(vec![
            fmt_f64(log_n / w - 1.0),
            fmt_f64(w),
            fmt_f64(c.alpha),
            fmt_f64(c.q),
            n.to_string(),
            fmt_f64(est.mean),
            fmt_f64(est.stderr),
            fmt_f64(predicted),
        ])?;
    }
    Ok(vec![out.finish()?, fields.finish()?])
}

fn surrogate_scan(c: &SurrogateScanConfig, seed: Seed) -> RunResult<Vec<OutputFile>> {
    let mut out = Table::new("surrogate_scan.csv", SURROGATE_HEADER)?;
    let mut sampling = Table::new("surrogate_sampling.csv", SAMPLING_HEADER)?;
    for &alpha in &c.alpha {
        for &q in &c.q {
            for &theta in &c.theta {
                let r = surrogate_integral_moment(&SurrogateConfig { theta, w: c.w, alpha, q, n_fields: c.n_fields, seed })?;
                out.row(vec![
                    fmt_f64(theta),
                    fmt_f64(c.w),
                    fmt_f64(alpha),
                    fmt_f64(q),
                    fmt_f64(r.nominal_points),
                    fmt_f64(r.contribution.mean),
                    fmt_f64(r.contribution.stderr),
                    fmt_f64(r.predicted()),
                ])?;
                sampling.row(vec![
                    fmt_f64(theta),
                    fmt_f64(alpha),
                    fmt_f64(q),
                    fmt_f64(r.nominal_points),
                    r.sampled_points.to_string(),
                    r.method.to_string(),
                    fmt_f64(r.log_contribution),
                    fmt_f64(r.log_predicted),
                ])?;
            }
        }
    }
    Ok(vec![out.finish()?, sampling.finish()?])
}
