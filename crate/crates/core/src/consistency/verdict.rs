use serde::Serialize;

use super::curve::ConvergenceCurve;

/// Outcome of comparing a curve with a limiting value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithLimit,
    InconsistentWithLimit,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConsistentWithLimit => "consistent_with_limit",
            Verdict::InconsistentWithLimit => "inconsistent_with_limit",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Monte Carlo bands are `se_multiplier` standard errors wide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancePolicy {
    pub se_multiplier: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self { se_multiplier: 3.0 }
    }
}

/// Consistent when the largest-n estimate is within the band of `limit` and
/// the distance to `limit` never grows by more than the bands allow along the
/// grid. Inconclusive when the last row has no estimate.
pub fn verdict(curve: &ConvergenceCurve, limit: f64, policy: TolerancePolicy) -> Verdict {
    let k = policy.se_multiplier;
    let last = &curve.last().estimate;
    let (Some(est), Some(se)) = (last.estimate, last.std_error) else {
        return Verdict::Inconclusive;
    };
    if (est - limit).abs() > k * se {
        return Verdict::InconsistentWithLimit;
    }
    let defined: Vec<(f64, f64)> = curve
        .rows
        .iter()
        .filter_map(|r| Some((r.estimate.estimate?, r.estimate.std_error?)))
        .collect();
    let trending_away = defined.windows(2).any(|w| {
        let (e0, s0) = w[0];
        let (e1, s1) = w[1];
        (e1 - limit).abs() - k * s1 > (e0 - limit).abs() + k * s0
    });
    if trending_away {
        Verdict::InconsistentWithLimit
    } else {
        Verdict::ConsistentWithLimit
    }
}
