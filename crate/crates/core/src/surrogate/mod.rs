//! Gaussian model of `log|ζ|` at desk scale. The parameter `W` replaces
//! `log log x`, which no feasible `x` makes large.

mod field;
mod moment;
mod normal;
mod regime;

pub use field::{
    covariance, covariance_matrix, jittered_cholesky, simulate_field, CovarianceSource, FieldSummary,
    GaussianFieldConfig, JITTER, MAX_CORRELATED_POINTS,
};
pub use moment::{
    contribution_maximizer, log_exp_sum, surrogate_integral_moment, SamplingMethod, SurrogateConfig,
    SurrogateResult, MIN_FIELDS, TOP_POINTS,
};
pub use normal::{ln_normal_cdf, normal_quantile};
pub use regime::{low_alpha_threshold, predict_regime, Regime, RegimePrediction};
