use crate::model::{GaussianMeanModel, ParameterRegion, SufficientStats};
use crate::numerics::phi_upper;
use crate::{Error, Result};

const GRID_POINTS: usize = 1000;

/// One-sided mean test statistic `sqrt(n) (xbar - theta1)`.
pub fn test_statistic(stats: &SufficientStats, theta1: f64) -> f64 {
    (stats.n as f64).sqrt() * (stats.mean - theta1)
}

/// `Pr(T > t | theta)` for the standardised one-sided mean test.
fn exceedance(model: &GaussianMeanModel, stats: &SufficientStats, theta: f64) -> f64 {
    phi_upper(test_statistic(stats, theta) / model.sd())
}

fn upper_endpoint(theta1_region: &ParameterRegion) -> Result<f64> {
    let (_, upper) = theta1_region.bounds();
    if upper == f64::INFINITY {
        return Err(Error::unsupported(format!(
            "p-value with Theta_1 = {theta1_region} unbounded above: the supremum over \
             Theta_1 is identically 1"
        )));
    }
    Ok(upper)
}

/// p-value of the one-sided Gaussian mean test that rejects `H1` for large
/// `T`: `sup over Theta_1 of Pr(T > t | theta)`.
///
/// `Pr(T > t | theta)` increases with theta, so the supremum sits at the upper
/// end of `Theta_1` (attained when that endpoint is closed).
pub fn p_value(
    model: &GaussianMeanModel,
    stats: &SufficientStats,
    theta1_region: &ParameterRegion,
) -> Result<f64> {
    let upper = upper_endpoint(theta1_region)?;
    Ok(exceedance(model, stats, upper))
}

/// Grid-search evaluation of the same supremum: 1000 points over the
/// closure of `Theta_1`, then a tenfold refinement around the best point.
/// Intended as a fallback for region kinds without a monotonicity argument.
pub fn p_value_by_grid(
    model: &GaussianMeanModel,
    stats: &SufficientStats,
    theta1_region: &ParameterRegion,
) -> Result<f64> {
    let upper = upper_endpoint(theta1_region)?;
    let (lower, _) = theta1_region.bounds();
    if lower == upper {
        return Ok(exceedance(model, stats, upper));
    }
    let span = 10.0 * model.sd().max(1.0);
    let lower = lower.max(upper - span);
    let search = |a: f64, b: f64| {
        let step = (b - a) / (GRID_POINTS - 1) as f64;
        (0..GRID_POINTS)
            .map(|i| {
                if i == GRID_POINTS - 1 {
                    b
                } else {
                    a + step * i as f64
                }
            })
            .map(|t| (t, exceedance(model, stats, t)))
            .fold((a, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    };
    let (t, coarse) = search(lower, upper);
    let step = (upper - lower) / (GRID_POINTS - 1) as f64;
    let (_, fine) = search((t - step).max(lower), (t + step).min(upper));
    Ok(coarse.max(fine))
}
