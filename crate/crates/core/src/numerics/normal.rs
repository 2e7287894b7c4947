use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Bracket for the quantile bisection. Phi(-39) underflows to zero in f64.
const QUANTILE_BRACKET: f64 = 39.0;
const BISECTION_WIDTH: f64 = 1e-9;

/// Standard normal CDF for any `z`, including infinities.
///
/// Evaluated as `erfc(-z / sqrt 2) / 2` with the FreeBSD-derived `erfc` from
/// `libm`, which is accurate to about one ulp. The lower tail therefore keeps
/// full relative precision and the absolute error stays below 1e-15.
#[inline]
pub(crate) fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `1 - Phi(z)` computed without cancellation.
#[inline]
pub(crate) fn phi_upper(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

fn require_finite(z: f64, what: &str) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {z}")))
    }
}

/// Distribution function of the standard normal random variable.
pub fn std_normal_cdf(z: f64) -> Result<f64> {
    require_finite(z, "z")?;
    Ok(phi(z))
}

/// Upper tail probability `Pr(Z > z)`.
pub fn std_normal_upper_tail(z: f64) -> Result<f64> {
    require_finite(z, "z")?;
    Ok(phi_upper(z))
}

pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// Inverse of [`std_normal_cdf`].
///
/// Bisection on the CDF down to a bracket of width 1e-9, then a single
/// Newton step. Probabilities above one half are solved against the upper
/// tail so that `1 - p` never has to be formed from a tiny tail mass.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let (target, tail): (f64, fn(f64) -> f64) = if p < 0.5 {
        (p, phi)
    } else {
        // exact for p in [0.5, 1)
        (1.0 - p, phi_upper)
    };
    // The tail function is monotone; for `phi` it increases, for `phi_upper`
    // it decreases, so search on the side of zero where the root lives.
    let (mut lo, mut hi) = if p < 0.5 {
        (-QUANTILE_BRACKET, 0.0)
    } else {
        (0.0, QUANTILE_BRACKET)
    };
    let increasing = p < 0.5;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let below = tail(mid) < target;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let density = std_normal_pdf(z);
    if density == 0.0 {
        return Ok(z);
    }
    let residual = tail(z) - target;
    Ok(if increasing {
        z - residual / density
    } else {
        z + residual / density
    })
}

/// `log N(x | mean, variance)`.
pub fn gaussian_log_density(x: f64, mean: f64, variance: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::domain(format!(
            "variance must be positive and finite, got {variance}"
        )));
    }
    let d = x - mean;
    Ok(-0.5 * (LN_2 + PI.ln() + variance.ln()) - d * d / (2.0 * variance))
}

/// `Phi(b) - Phi(a)` for `a <= b`, taking the difference on whichever side
/// of zero keeps the two terms small.
pub fn normal_interval_mass(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a >= 0.0 {
        phi_upper(a) - phi_upper(b)
    } else if b <= 0.0 {
        phi(b) - phi(a)
    } else {
        1.0 - phi(a) - phi_upper(b)
    }
}
