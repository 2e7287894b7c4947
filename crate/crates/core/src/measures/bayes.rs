use super::prior::{PriorWithinRegions, WithinRegion};
use crate::model::{HypothesisPair, Model, ParameterRegion, SufficientStats};
use crate::numerics::log_sum_exp_unchecked;
use crate::numerics::GaussLegendre;
use crate::{Error, Result};

/// Relative tolerance between the order-64 and order-128 evaluations.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

// Panels are graded geometrically away from the likelihood peak out to
// 2^LIKELIHOOD_DOUBLINGS peak widths; beyond that the integrand is negligible.
const LIKELIHOOD_DOUBLINGS: i32 = 6;
const PRIOR_DOUBLINGS: i32 = 3;

/// `log integral f(x | theta) q(theta) dtheta`, with the likelihood taken
/// relative to its unrestricted maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalLikelihood {
    pub log_value: f64,
    /// `|I_64 / I_128 - 1|`; zero for point masses.
    pub error_estimate: f64,
    /// Prior probability outside the integration range.
    pub truncated_mass: f64,
    pub panels: usize,
}

impl MarginalLikelihood {
    fn exact(log_value: f64) -> Self {
        Self {
            log_value,
            error_estimate: 0.0,
            truncated_mass: 0.0,
            panels: 0,
        }
    }
}

fn graded_breakpoints(
    points: &mut Vec<f64>,
    center: f64,
    step: f64,
    doublings: i32,
    lo: f64,
    hi: f64,
) {
    points.push(center.clamp(lo, hi));
    for j in 0..=doublings {
        let d = step * 2f64.powi(j);
        for p in [center - d, center + d] {
            if p > lo && p < hi {
                points.push(p);
            }
        }
    }
}

/// Composite Gauss-Legendre integral of `exp(log_f)` over `[lo, hi]` in log
/// space, evaluated with order 64 and order 128 on the same panels.
fn log_integrate(log_f: impl Fn(f64) -> f64, breakpoints: &[f64]) -> (f64, f64) {
    let rule64 = GaussLegendre::order_64();
    let rule128 = GaussLegendre::order_128();
    let total = |rule: &GaussLegendre| {
        let terms: Vec<(f64, f64)> = breakpoints
            .windows(2)
            .flat_map(|w| rule.mapped(w[0], w[1]))
            .map(|(x, w)| (log_f(x), w))
            .collect();
        log_sum_exp_unchecked(terms.iter().copied())
    };
    (total(rule64), total(rule128))
}

/// Marginal likelihood over the part of `q`'s support inside `[lo, hi]`.
pub fn log_marginal_likelihood_over<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    q: &WithinRegion,
    lo: f64,
    hi: f64,
) -> Result<MarginalLikelihood> {
    if let WithinRegion::PointMass(p) = *q {
        let inside = p >= lo && p <= hi;
        return Ok(MarginalLikelihood::exact(if inside {
            model.relative_log_likelihood(p, stats)
        } else {
            f64::NEG_INFINITY
        }));
    }
    let (support_lo, support_hi, truncated_mass) = q.integration_support();
    let (lo, hi) = (lo.max(support_lo), hi.min(support_hi));
    if !(lo < hi) {
        return Ok(MarginalLikelihood {
            truncated_mass,
            ..MarginalLikelihood::exact(f64::NEG_INFINITY)
        });
    }

    let window = ParameterRegion::closed(lo, hi)?;
    let peak = model.restricted_mle(stats, &window).theta;
    let scale = model.likelihood_scale(stats);
    let probe = scale * 1e-3;
    let slope = (model.relative_log_likelihood(peak + probe, stats)
        - model.relative_log_likelihood(peak - probe, stats))
    .abs()
        / (2.0 * probe);
    // A peak clamped to an edge decays at rate `slope`; resolve that too.
    let step = if slope * scale > 1.0 {
        1.0 / slope
    } else {
        scale
    };

    let mut points = vec![lo, hi];
    graded_breakpoints(&mut points, peak, step, LIKELIHOOD_DOUBLINGS, lo, hi);
    if let WithinRegion::TruncatedNormal { mean, sd, .. } = *q {
        graded_breakpoints(&mut points, mean, sd, PRIOR_DOUBLINGS, lo, hi);
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));

    let log_f = |t: f64| model.relative_log_likelihood(t, stats) + q.log_density(t);
    let (l64, l128) = log_integrate(log_f, &points);
    let error_estimate = if l128 == f64::NEG_INFINITY && l64 == f64::NEG_INFINITY {
        0.0
    } else {
        (l64 - l128).exp_m1().abs()
    };
    let result = MarginalLikelihood {
        log_value: l128,
        error_estimate,
        truncated_mass,
        panels: points.len() - 1,
    };
    if !(error_estimate <= QUADRATURE_TOLERANCE) {
        return Err(Error::Numerical {
            message: "marginal likelihood quadrature did not converge under order doubling".into(),
            diagnostics: format!(
                "order-64 log value {l64}, order-128 log value {l128}, relative gap {error_estimate:e}, \
                 {} panels on [{lo}, {hi}], n = {}, mean = {}",
                result.panels, stats.n, stats.mean
            ),
        });
    }
    Ok(result)
}

/// Marginal likelihood over the whole support of `q`.
pub fn log_marginal_likelihood<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    q: &WithinRegion,
) -> Result<MarginalLikelihood> {
    log_marginal_likelihood_over(model, stats, q, f64::NEG_INFINITY, f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesFactor {
    pub log_b12: f64,
    pub marginal1: MarginalLikelihood,
    pub marginal2: MarginalLikelihood,
}

impl BayesFactor {
    pub fn log_b21(&self) -> f64 {
        -self.log_b12
    }
}

pub(crate) fn check_prior_matches(
    prior: &PriorWithinRegions,
    hypotheses: &HypothesisPair,
) -> Result<()> {
    for (q, region, label) in [
        (&prior.q1, hypotheses.theta1(), "Theta_1"),
        (&prior.q2, hypotheses.theta2(), "Theta_2"),
    ] {
        if !q.region().is_subset_of(region) {
            return Err(Error::domain(format!(
                "prior on {label} lives on {} which is not inside {region}",
                q.region()
            )));
        }
    }
    Ok(())
}

/// Bayes factor `b12` with its quadrature diagnostics.
pub fn bayes_factor<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    prior: &PriorWithinRegions,
    hypotheses: &HypothesisPair,
) -> Result<BayesFactor> {
    check_prior_matches(prior, hypotheses)?;
    let marginal1 = log_marginal_likelihood(model, stats, &prior.q1)?;
    let marginal2 = log_marginal_likelihood(model, stats, &prior.q2)?;
    let log_b12 = marginal1.log_value - marginal2.log_value;
    if log_b12.is_nan() {
        return Err(Error::Numerical {
            message: "both marginal likelihoods vanish".into(),
            diagnostics: format!("n = {}, mean = {}", stats.n, stats.mean),
        });
    }
    Ok(BayesFactor {
        log_b12,
        marginal1,
        marginal2,
    })
}

/// `log b12`, the log ratio of the prior-weighted marginal likelihoods.
pub fn bayes_factor_log<M: Model + ?Sized>(
    model: &M,
    stats: &SufficientStats,
    prior: &PriorWithinRegions,
    hypotheses: &HypothesisPair,
) -> Result<f64> {
    bayes_factor(model, stats, prior, hypotheses).map(|b| b.log_b12)
}

/// `log p21 = log b21 + log q(Theta_2) / q(Theta_1)`.
pub fn posterior_odds_log(bf21_log: f64, prior: &PriorWithinRegions) -> Result<f64> {
    Ok(bf21_log + prior.log_prior_odds_21()?)
}
