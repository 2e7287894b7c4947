use std::f64::consts::PI;

use crate::model::ParameterRegion;
use crate::numerics::{normal_interval_mass, phi, std_normal_quantile, RandomStream};
use crate::{Error, Result};

// Infinite-support densities are integrated over +/- this many prior sds.
pub(crate) const TRUNCATION_SDS: f64 = 8.0;

/// A distribution of theta confined to one hypothesis region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WithinRegion {
    PointMass(f64),
    /// `N(mean, sd^2)` conditioned on `region`.
    TruncatedNormal {
        mean: f64,
        sd: f64,
        region: ParameterRegion,
        log_norm: f64,
    },
    /// Uniform on a bounded interval region.
    Uniform {
        region: ParameterRegion,
    },
}

impl WithinRegion {
    pub fn point_mass(theta: f64) -> Result<Self> {
        ParameterRegion::point(theta).map(|_| Self::PointMass(theta))
    }

    pub fn truncated_normal(mean: f64, sd: f64, region: ParameterRegion) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
            return Err(Error::domain(format!(
                "truncated normal needs finite mean and positive sd, got ({mean}, {sd})"
            )));
        }
        let ParameterRegion::Interval(_) = region else {
            return Err(Error::domain("a truncated normal needs an interval region"));
        };
        let (lo, hi) = region.bounds();
        let mass = normal_interval_mass((lo - mean) / sd, (hi - mean) / sd);
        if !(mass > 0.0) {
            return Err(Error::domain(format!(
                "N({mean}, {sd}^2) puts no representable mass on {region}"
            )));
        }
        Ok(Self::TruncatedNormal {
            mean,
            sd,
            region,
            log_norm: mass.ln(),
        })
    }

    pub fn uniform(region: ParameterRegion) -> Result<Self> {
        match region {
            ParameterRegion::Interval(i) if i.is_bounded() => Ok(Self::Uniform { region }),
            _ => Err(Error::domain(format!(
                "a uniform distribution needs a bounded interval, got {region}"
            ))),
        }
    }

    /// Region on which the distribution lives.
    pub fn region(&self) -> ParameterRegion {
        match *self {
            Self::PointMass(p) => ParameterRegion::Point(p),
            Self::TruncatedNormal { region, .. } | Self::Uniform { region } => region,
        }
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, Self::PointMass(_))
    }

    /// Log density with respect to Lebesgue measure; `-inf` off the support.
    /// Point masses have no density and return `NaN`.
    pub fn log_density(&self, theta: f64) -> f64 {
        match *self {
            Self::PointMass(_) => f64::NAN,
            Self::TruncatedNormal {
                mean,
                sd,
                region,
                log_norm,
            } => {
                if !region.contains(theta) {
                    return f64::NEG_INFINITY;
                }
                let z = (theta - mean) / sd;
                -0.5 * z * z - 0.5 * (2.0 * PI).ln() - sd.ln() - log_norm
            }
            Self::Uniform { region } => {
                if !region.contains(theta) {
                    return f64::NEG_INFINITY;
                }
                let (lo, hi) = region.bounds();
                -(hi - lo).ln()
            }
        }
    }

    /// Log probability of `[lo, hi]` (endpoints immaterial for densities).
    pub fn log_mass(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::PointMass(p) => {
                if p >= lo && p <= hi {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::TruncatedNormal {
                mean,
                sd,
                region,
                log_norm,
            } => {
                let (a, b) = region.bounds();
                let (lo, hi) = (lo.max(a), hi.min(b));
                if lo >= hi {
                    return f64::NEG_INFINITY;
                }
                normal_interval_mass((lo - mean) / sd, (hi - mean) / sd).ln() - log_norm
            }
            Self::Uniform { region } => {
                let (a, b) = region.bounds();
                let (lo, hi) = (lo.max(a), hi.min(b));
                if lo >= hi {
                    f64::NEG_INFINITY
                } else {
                    ((hi - lo) / (b - a)).ln()
                }
            }
        }
    }

    /// Interval used for numerical integration, with the probability it
    /// leaves out. Normal tails are cut at +/- 8 sd; when the region lies
    /// entirely beyond that, the 8 sd window starts at the nearer endpoint.
    pub fn integration_support(&self) -> (f64, f64, f64) {
        match *self {
            Self::PointMass(p) => (p, p, 0.0),
            Self::Uniform { region } => {
                let (a, b) = region.bounds();
                (a, b, 0.0)
            }
            Self::TruncatedNormal {
                mean, sd, region, ..
            } => {
                let (a, b) = region.bounds();
                let width = TRUNCATION_SDS * sd;
                let (mut lo, mut hi) = (a.max(mean - width), b.min(mean + width));
                if lo >= hi {
                    if a >= mean + width {
                        (lo, hi) = (a, b.min(a + width));
                    } else {
                        (lo, hi) = (a.max(b - width), b);
                    }
                }
                let kept = self.log_mass(lo, hi).exp();
                (lo, hi, (1.0 - kept).max(0.0))
            }
        }
    }

    /// A draw from the distribution, always inside its region.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        match *self {
            Self::PointMass(p) => p,
            Self::Uniform { region } => {
                let (a, b) = region.bounds();
                loop {
                    let theta = a + (b - a) * stream.uniform();
                    if region.contains(theta) {
                        return theta;
                    }
                }
            }
            Self::TruncatedNormal {
                mean, sd, region, ..
            } => {
                let (a, b) = region.bounds();
                let (alpha, beta) = ((a - mean) / sd, (b - mean) / sd);
                // Invert on the lower tail; reflect regions lying above the
                // mean so the inversion never works with masses near one.
                let (lo, hi, sign) = if alpha >= 0.0 {
                    (-beta, -alpha, -1.0)
                } else {
                    (alpha, beta, 1.0)
                };
                let (p_lo, p_hi) = (phi(lo), phi(hi));
                loop {
                    let u = p_lo + (p_hi - p_lo) * stream.uniform();
                    let Ok(z) = std_normal_quantile(u) else {
                        continue;
                    };
                    let theta = mean + sign * sd * z;
                    if region.contains(theta) {
                        return theta;
                    }
                }
            }
        }
    }
}

/// The prior `q` used by the Bayes factor and posterior odds: a distribution
/// within each hypothesis region and the prior mass `q(Theta_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorWithinRegions {
    pub q1: WithinRegion,
    pub q2: WithinRegion,
    pub q_theta1_mass: f64,
}

impl PriorWithinRegions {
    pub fn new(q1: WithinRegion, q2: WithinRegion, q_theta1_mass: f64) -> Result<Self> {
        check_mass(q_theta1_mass)?;
        Ok(Self {
            q1,
            q2,
            q_theta1_mass,
        })
    }

    /// `log q(Theta_2) / q(Theta_1)`.
    pub fn log_prior_odds_21(&self) -> Result<f64> {
        check_mass(self.q_theta1_mass)?;
        Ok(((1.0 - self.q_theta1_mass) / self.q_theta1_mass).ln())
    }
}

fn check_mass(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "q(Theta_1) must lie in (0, 1), got {q}"
        )))
    }
}
