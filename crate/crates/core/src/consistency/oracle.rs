//! Closed-form probabilities for the Gaussian point-hypothesis example
//! (unit variance; pass `delta / sigma` otherwise).

use crate::numerics::{phi_upper, std_normal_quantile};
use crate::sampler::Region;
use crate::{Error, Result};

/// Limit of `Pr(H1 | p-value in S)` when the power under `H2` tends to one:
/// `alpha_S w / (1 - w (1 - alpha_S))`, evaluated as
/// `alpha_S w / (alpha_S w + 1 - w)` so that `w = 1` gives exactly 1.
pub fn pvalue_limit(alpha_s: f64, w: f64) -> Result<f64> {
    if !(alpha_s > 0.0 && alpha_s < 1.0) {
        return Err(Error::domain(format!(
            "alpha_S must lie in (0, 1), got {alpha_s}"
        )));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("w must lie in [0, 1], got {w}")));
    }
    let joint = alpha_s * w;
    Ok(joint / (joint + (1.0 - w)))
}

/// `Pr(p-value < alpha_S | region)`: `alpha_S` under `H1` (the p-value is
/// uniform there) and the power `1 - Phi(z_{1 - alpha_S} - sqrt(n) delta)`
/// under `H2`.
pub fn gaussian_pvalue_strong_prob(
    region: Region,
    n: usize,
    delta: f64,
    alpha_s: f64,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(alpha_s > 0.0 && alpha_s < 1.0) {
        return Err(Error::domain(format!(
            "alpha_S must lie in (0, 1), got {alpha_s}"
        )));
    }
    Ok(match region {
        Region::Theta1 => alpha_s,
        Region::Theta2 => {
            let z = std_normal_quantile(1.0 - alpha_s)?;
            phi_upper(z - (n as f64).sqrt() * delta)
        }
    })
}

/// `Pr(log r21 >= log_k | region)` for any finite threshold on the log
/// scale. `log r21 = delta sum(x_i - theta1) - n delta^2 / 2`.
pub(crate) fn rl_strong_prob_log_threshold(
    region: Region,
    n: usize,
    delta: f64,
    log_k: f64,
) -> f64 {
    let root_n = (n as f64).sqrt();
    let shift = root_n * delta / 2.0;
    let z = log_k / (delta * root_n);
    match region {
        Region::Theta1 => phi_upper(z + shift),
        Region::Theta2 => phi_upper(z - shift),
    }
}

/// `Pr(r21 >= k_S | region)`: `1 - Phi(log k_S / (delta sqrt n) +/- sqrt(n) delta / 2)`
/// with `+` under `H1` and `-` under `H2`.
pub fn gaussian_rl_strong_prob(region: Region, n: usize, delta: f64, k_s: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(k_s > 1.0) {
        return Err(Error::domain(format!("k_S must exceed 1, got {k_s}")));
    }
    Ok(rl_strong_prob_log_threshold(region, n, delta, k_s.ln()))
}

/// Bayes combination `w p1 / (w p1 + (1 - w) p2)` of the per-region
/// probabilities of landing in `S`.
pub fn exact_conditional_prob(strong_prob_h1: f64, strong_prob_h2: f64, w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::domain(format!("w must lie in (0, 1), got {w}")));
    }
    for p in [strong_prob_h1, strong_prob_h2] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability {p} outside [0, 1]")));
        }
    }
    let joint1 = w * strong_prob_h1;
    let total = joint1 + (1.0 - w) * strong_prob_h2;
    if total == 0.0 {
        return Err(Error::UndefinedConditional(
            "neither region can produce strong evidence".into(),
        ));
    }
    Ok(joint1 / total)
}
