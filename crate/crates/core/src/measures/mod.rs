//! The five measures of evidence and their calibrations.
//!
//! Every measure is reported in the direction "evidence against `H1`,
//! relative to `H2`": the p-value of the test of `H1`, and `log r21`,
//! `log r21^e`, `log b21`, `log p21` for the ratio-type measures.

mod bayes;
mod calibration;
mod coherence;
mod likelihood;
mod prior;
mod pvalue;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bayes::{
    bayes_factor, bayes_factor_log, log_marginal_likelihood, log_marginal_likelihood_over,
    posterior_odds_log, BayesFactor, MarginalLikelihood, QUADRATURE_TOLERANCE,
};
pub use calibration::{categorize, Calibration, Orientation, StrongEvidenceRegion};
pub use coherence::{coherence_audit, NestedPair};
pub use likelihood::{
    extended_ratio_of_likelihoods_log, log_sup_likelihood, ratio_of_likelihoods_log,
};
pub use prior::{PriorWithinRegions, WithinRegion};
pub use pvalue::{p_value, p_value_by_grid, test_statistic};

use crate::model::{GaussianMeanModel, HypothesisPair, SufficientStats};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureId {
    #[serde(rename = "pvalue")]
    PValue,
    #[serde(rename = "rl")]
    Rl,
    #[serde(rename = "erl")]
    Erl,
    #[serde(rename = "bf")]
    Bf,
    #[serde(rename = "posterior_odds")]
    PosteriorOdds,
}

impl MeasureId {
    pub const ALL: [MeasureId; 5] = [
        MeasureId::PValue,
        MeasureId::Rl,
        MeasureId::Erl,
        MeasureId::Bf,
        MeasureId::PosteriorOdds,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureId::PValue => "pvalue",
            MeasureId::Rl => "rl",
            MeasureId::Erl => "erl",
            MeasureId::Bf => "bf",
            MeasureId::PosteriorOdds => "posterior_odds",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown measure `{s}` (expected one of pvalue, rl, erl, bf, posterior_odds)"
                ))
            })
    }
}

/// A measure's value on one dataset and whether it falls in `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceResult {
    pub measure: MeasureId,
    pub value: f64,
    pub in_strong_region: bool,
}

/// Evaluates a fixed list of measures against one hypothesis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceEvaluator {
    measures: Vec<MeasureId>,
    regions: Vec<StrongEvidenceRegion>,
    calibration: Calibration,
    bayes_prior: Option<PriorWithinRegions>,
}

impl EvidenceEvaluator {
    pub fn new(
        measures: &[MeasureId],
        calibration: Calibration,
        bayes_prior: Option<PriorWithinRegions>,
    ) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::domain("at least one measure must be configured"));
        }
        for (i, m) in measures.iter().enumerate() {
            if measures[..i].contains(m) {
                return Err(Error::domain(format!("measure {m} configured twice")));
            }
        }
        let regions = measures
            .iter()
            .map(|&m| calibration.region_for(m))
            .collect::<Result<_>>()?;
        let needs_prior = measures
            .iter()
            .any(|m| matches!(m, MeasureId::Bf | MeasureId::PosteriorOdds));
        if needs_prior && bayes_prior.is_none() {
            return Err(Error::domain(
                "bf and posterior_odds need a prior within the regions",
            ));
        }
        Ok(Self {
            measures: measures.to_vec(),
            regions,
            calibration,
            bayes_prior,
        })
    }

    pub fn measures(&self) -> &[MeasureId] {
        &self.measures
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    pub fn bayes_prior(&self) -> Option<&PriorWithinRegions> {
        self.bayes_prior.as_ref()
    }

    /// All shipped measures see the data only through the sample mean.
    pub fn uses_sample_mean_only(&self) -> bool {
        true
    }

    /// Rejects hypothesis configurations some measure cannot evaluate.
    pub fn check_supported(&self, hypotheses: &HypothesisPair) -> Result<()> {
        for &m in &self.measures {
            match m {
                MeasureId::PValue => {
                    if hypotheses.theta1().bounds().1 == f64::INFINITY {
                        return Err(Error::unsupported(format!(
                            "measure pvalue with Theta_1 = {} unbounded above",
                            hypotheses.theta1()
                        )));
                    }
                }
                MeasureId::Rl => {
                    if !hypotheses.is_point_pair() {
                        return Err(Error::unsupported(format!(
                            "measure rl needs point hypotheses, got {} and {}",
                            hypotheses.theta1(),
                            hypotheses.theta2()
                        )));
                    }
                }
                MeasureId::Erl => {}
                MeasureId::Bf | MeasureId::PosteriorOdds => {
                    let prior = self.bayes_prior.as_ref().expect("validated in new");
                    bayes::check_prior_matches(prior, hypotheses)
                        .map_err(|e| Error::unsupported(format!("measure {m}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(
        &self,
        model: &GaussianMeanModel,
        hypotheses: &HypothesisPair,
        stats: &SufficientStats,
    ) -> Result<Vec<EvidenceResult>> {
        let mut log_b21 = None;
        let mut bf21 = || -> Result<f64> {
            if let Some(v) = log_b21 {
                return Ok(v);
            }
            let prior = self.bayes_prior.as_ref().expect("validated in new");
            let v = -bayes_factor_log(model, stats, prior, hypotheses)?;
            log_b21 = Some(v);
            Ok(v)
        };
        self.measures
            .iter()
            .zip(&self.regions)
            .map(|(&measure, region)| {
                let value = match measure {
                    MeasureId::PValue => p_value(model, stats, hypotheses.theta1())?,
                    MeasureId::Rl => {
                        let (t1, t2) = (
                            hypotheses.theta1().bounds().0,
                            hypotheses.theta2().bounds().0,
                        );
                        ratio_of_likelihoods_log(model, stats, t2, t1)?
                    }
                    MeasureId::Erl => extended_ratio_of_likelihoods_log(
                        model,
                        stats,
                        hypotheses.theta2(),
                        hypotheses.theta1(),
                    )?,
                    MeasureId::Bf => bf21()?,
                    MeasureId::PosteriorOdds => {
                        posterior_odds_log(bf21()?, self.bayes_prior.as_ref().expect("validated"))?
                    }
                };
                Ok(EvidenceResult {
                    measure,
                    value,
                    in_strong_region: categorize(value, region),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_prior() -> PriorWithinRegions {
        PriorWithinRegions::new(
            WithinRegion::point_mass(0.0).unwrap(),
            WithinRegion::point_mass(1.0).unwrap(),
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn measure_ids_round_trip() {
        for m in MeasureId::ALL {
            assert_eq!(m.as_str().parse::<MeasureId>().unwrap(), m);
        }
        assert!("lr".parse::<MeasureId>().is_err());
    }

    #[test]
    fn evaluator_validation() {
        let c = Calibration::default();
        assert!(EvidenceEvaluator::new(&[], c, None).is_err());
        assert!(EvidenceEvaluator::new(&[MeasureId::Rl, MeasureId::Rl], c, None).is_err());
        assert!(EvidenceEvaluator::new(&[MeasureId::Bf], c, None).is_err());
        let bad = Calibration { k_s: 1.0, ..c };
        assert!(EvidenceEvaluator::new(&[MeasureId::Rl], bad, None).is_err());
    }

    #[test]
    fn evaluates_all_measures_on_point_hypotheses() {
        let model = GaussianMeanModel::default();
        let h = HypothesisPair::points(0.0, 1.0).unwrap();
        let e =
            EvidenceEvaluator::new(&MeasureId::ALL, Calibration::default(), Some(point_prior()))
                .unwrap();
        e.check_supported(&h).unwrap();
        let stats = SufficientStats::from_mean(16, 0.75).unwrap();
        let r = e.evaluate(&model, &h, &stats).unwrap();
        assert_eq!(r.len(), 5);
        // log r21 = n (xbar - 1/2) = 4, between ln 30 and ln 150
        assert_eq!(r[1].value, 4.0);
        assert_eq!(r[2].value, 4.0);
        assert!((r[3].value - 4.0).abs() < 1e-10);
        assert!((r[4].value - 4.0).abs() < 1e-10);
        assert!(r[1].in_strong_region && !r[3].in_strong_region);
        assert!((r[0].value - 1.349898031630e-3).abs() < 1e-12 && r[0].in_strong_region);
    }

    #[test]
    fn unsupported_configurations_are_reported() {
        let h =
            HypothesisPair::new("(-inf, 0]".parse().unwrap(), "(0, inf)".parse().unwrap()).unwrap();
        let c = Calibration::default();
        let rl = EvidenceEvaluator::new(&[MeasureId::Erl, MeasureId::Rl], c, None).unwrap();
        assert!(matches!(
            rl.check_supported(&h),
            Err(Error::UnsupportedConfiguration(_))
        ));
        let swapped = HypothesisPair::new(*h.theta2(), *h.theta1()).unwrap();
        let pv = EvidenceEvaluator::new(&[MeasureId::PValue], c, None).unwrap();
        assert!(pv.check_supported(&h).is_ok());
        assert!(matches!(
            pv.check_supported(&swapped),
            Err(Error::UnsupportedConfiguration(_))
        ));
        let bf = EvidenceEvaluator::new(&[MeasureId::Bf], c, Some(point_prior())).unwrap();
        assert!(bf.check_supported(&h).is_ok());
        assert!(matches!(
            bf.check_supported(&swapped),
            Err(Error::UnsupportedConfiguration(_))
        ));
    }
}
