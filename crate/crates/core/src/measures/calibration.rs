use serde::{Deserialize, Serialize};

use super::MeasureId;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    LowIsStrong,
    HighIsStrong,
}

/// The category `S` of the strongest evidence.
///
/// For low-is-strong measures (p-values) `S = [0, threshold)`. For
/// high-is-strong measures (likelihood ratios, Bayes factors, odds)
/// `S = [threshold, inf)` on the ratio scale; values are compared on the log
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongEvidenceRegion {
    pub orientation: Orientation,
    pub threshold: f64,
}

impl StrongEvidenceRegion {
    pub fn p_value(alpha_s: f64) -> Result<Self> {
        if !(alpha_s > 0.0 && alpha_s < 1.0) {
            return Err(Error::domain(format!(
                "alpha_S must lie in (0, 1), got {alpha_s}"
            )));
        }
        Ok(Self {
            orientation: Orientation::LowIsStrong,
            threshold: alpha_s,
        })
    }

    /// `S = [k, inf)` for a ratio threshold `k > 1`.
    pub fn ratio(k: f64) -> Result<Self> {
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::domain(format!(
                "ratio threshold must exceed 1, got {k}"
            )));
        }
        Ok(Self {
            orientation: Orientation::HighIsStrong,
            threshold: k,
        })
    }

    pub fn contains(&self, value: f64) -> bool {
        categorize(value, self)
    }
}

/// Membership of `value` in the strong-evidence region. Ratio-type values
/// are on the log scale.
pub fn categorize(value: f64, region: &StrongEvidenceRegion) -> bool {
    match region.orientation {
        Orientation::LowIsStrong => value >= 0.0 && value < region.threshold,
        Orientation::HighIsStrong => value >= region.threshold.ln(),
    }
}

/// Calibration thresholds for every measure. These are conventions, so they
/// are configuration rather than constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub alpha_s: f64,
    pub k_s: f64,
    pub bf_threshold: f64,
    /// No calibration for posterior odds is standard; defaults to the Bayes
    /// factor threshold.
    pub odds_threshold: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            alpha_s: 0.01,
            k_s: 30.0,
            bf_threshold: 150.0,
            odds_threshold: 150.0,
        }
    }
}

impl Calibration {
    pub fn region_for(&self, measure: MeasureId) -> Result<StrongEvidenceRegion> {
        match measure {
            MeasureId::PValue => StrongEvidenceRegion::p_value(self.alpha_s),
            MeasureId::Rl | MeasureId::Erl => StrongEvidenceRegion::ratio(self.k_s),
            MeasureId::Bf => StrongEvidenceRegion::ratio(self.bf_threshold),
            MeasureId::PosteriorOdds => StrongEvidenceRegion::ratio(self.odds_threshold),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_value_region_is_half_open() {
        let s = StrongEvidenceRegion::p_value(0.01).unwrap();
        assert!(!categorize(0.01, &s));
        assert!(categorize(0.0, &s));
        assert!(categorize(0.009_999_999, &s));
        assert!(!categorize(f64::NAN, &s));
    }

    #[test]
    fn ratio_region_is_closed_at_threshold() {
        let s = StrongEvidenceRegion::ratio(30.0).unwrap();
        assert!(categorize(30f64.ln(), &s));
        assert!(!categorize(30f64.ln() - 1e-12, &s));
        assert!(categorize(f64::INFINITY, &s));
    }

    #[test]
    fn invalid_thresholds() {
        assert!(StrongEvidenceRegion::p_value(0.0).is_err());
        assert!(StrongEvidenceRegion::p_value(1.0).is_err());
        assert!(StrongEvidenceRegion::ratio(1.0).is_err());
        assert!(StrongEvidenceRegion::ratio(0.5).is_err());
    }

    #[test]
    fn defaults() {
        let c = Calibration::default();
        assert_eq!((c.alpha_s, c.k_s, c.bf_threshold), (0.01, 30.0, 150.0));
        assert_eq!(c.region_for(MeasureId::Bf).unwrap().threshold, 150.0);
    }
}
