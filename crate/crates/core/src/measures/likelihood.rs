use crate::model::{Model, ParameterRegion, SufficientStats};
use crate::{Error, Result};

/// `log r12 = log f(x | theta1) - log f(x | theta2)`.
pub fn ratio_of_likelihoods_log<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    theta1: f64,
    theta2: f64,
) -> Result<f64> {
    if theta1 == theta2 {
        return Err(Error::domain(format!(
            "ratio of likelihoods needs distinct hypotheses, got theta1 = theta2 = {theta1}"
        )));
    }
    Ok(model.relative_log_likelihood(theta1, stats) - model.relative_log_likelihood(theta2, stats))
}

/// `log sup over the union of `regions` of f(x | theta)`, relative to the
/// unrestricted maximum.
pub fn log_sup_likelihood<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    regions: &[ParameterRegion],
) -> f64 {
    regions
        .iter()
        .map(|r| model.relative_log_likelihood(model.restricted_mle(stats, r).theta, stats))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `log r12^e = log sup_{Theta_1} f - log sup_{Theta_2} f`, each supremum at
/// the restricted maximum-likelihood estimate. On point regions this is the
/// plain ratio of likelihoods, computed along the same path.
pub fn extended_ratio_of_likelihoods_log<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    theta1_region: &ParameterRegion,
    theta2_region: &ParameterRegion,
) -> Result<f64> {
    if !theta1_region.is_disjoint_from(theta2_region) {
        return Err(Error::domain(format!(
            "extended ratio of likelihoods needs disjoint regions, got {theta1_region} and {theta2_region}"
        )));
    }
    let sup1 =
        model.relative_log_likelihood(model.restricted_mle(stats, theta1_region).theta, stats);
    let sup2 =
        model.relative_log_likelihood(model.restricted_mle(stats, theta2_region).theta, stats);
    Ok(sup1 - sup2)
}
