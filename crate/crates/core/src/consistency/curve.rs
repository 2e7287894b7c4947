use rayon::prelude::*;
use serde::Serialize;

use super::estimate::{ConsistencyEstimate, Tally};
use super::oracle::{
    exact_conditional_prob, gaussian_pvalue_strong_prob, rl_strong_prob_log_threshold,
};
use crate::measures::{MeasureId, WithinRegion};
use crate::sampler::{Region, ReplicationSetup};
use crate::{Error, Result};

/// Stream ids for sample size number `n_index` start here, so every
/// `(n, replication)` pair gets its own stream for up to `2^40` replications.
pub fn stream_base_for(n_index: usize) -> u64 {
    (n_index as u64) << 40
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub estimate: ConsistencyEstimate,
    /// Exact `Pr(H1 | S)` where a closed form exists.
    pub oracle: Option<f64>,
}

/// Estimates of `Pr(H1 | S)` for one measure over increasing sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceCurve {
    pub measure: MeasureId,
    pub rows: Vec<CurveRow>,
}

impl ConvergenceCurve {
    pub fn new(measure: MeasureId, rows: Vec<CurveRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::domain("a convergence curve needs at least one row"));
        }
        if rows.windows(2).any(|w| w[0].estimate.n >= w[1].estimate.n) {
            return Err(Error::domain("sample sizes must be strictly increasing"));
        }
        if rows.iter().any(|r| r.estimate.measure != measure) {
            return Err(Error::domain("rows belong to a different measure"));
        }
        Ok(Self { measure, rows })
    }

    pub fn last(&self) -> &CurveRow {
        self.rows.last().expect("non-empty by construction")
    }
}

/// Checks that the grid is non-empty, positive and strictly increasing.
pub fn check_n_grid(n_grid: &[usize]) -> Result<()> {
    if n_grid.is_empty() {
        return Err(Error::domain("n_grid must not be empty"));
    }
    if n_grid.contains(&0) {
        return Err(Error::domain("every n must be at least 1"));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n_grid must be strictly increasing"));
    }
    Ok(())
}

/// One curve per configured measure. Each sample size streams its
/// replications through a parallel fold of counts, so memory does not grow
/// with `replications` and the result does not depend on the worker count.
pub fn build_convergence_curves(
    setup: &ReplicationSetup,
    n_grid: &[usize],
    replications: u64,
    master_seed: u64,
) -> Result<Vec<ConvergenceCurve>> {
    check_n_grid(n_grid)?;
    if replications == 0 {
        return Err(Error::domain("replication count must be at least 1"));
    }
    if replications >= 1 << 40 {
        return Err(Error::domain("replication count must stay below 2^40"));
    }
    let measures = setup.evaluator.measures().to_vec();
    let mut rows: Vec<Vec<CurveRow>> = vec![Vec::with_capacity(n_grid.len()); measures.len()];
    for (n_index, &n) in n_grid.iter().enumerate() {
        let base = stream_base_for(n_index);
        let tally = (0..replications)
            .into_par_iter()
            .try_fold(
                || Tally::new(measures.len()),
                |mut t, i| {
                    t.observe(&setup.replicate(master_seed, base, i, n)?);
                    Ok::<_, Error>(t)
                },
            )
            .try_reduce(|| Tally::new(measures.len()), |a, b| Ok(a.merge(b)))?;
        for (j, &measure) in measures.iter().enumerate() {
            rows[j].push(CurveRow {
                estimate: tally.estimate(j, measure, n),
                oracle: exact_oracle(setup, measure, n),
            });
        }
    }
    measures
        .into_iter()
        .zip(rows)
        .map(|(m, r)| ConvergenceCurve::new(m, r))
        .collect()
}

/// Closed-form `Pr(H1 | S)` for point hypotheses `theta1 < theta2` with
/// point-mass priors; `None` for anything else.
pub fn exact_oracle(setup: &ReplicationSetup, measure: MeasureId, n: usize) -> Option<f64> {
    let h = &setup.hypotheses;
    if !h.is_point_pair() {
        return None;
    }
    let (t1, t2) = (h.theta1().bounds().0, h.theta2().bounds().0);
    if !(t2 > t1) {
        return None;
    }
    let delta = (t2 - t1) / setup.model.sd();
    let c = setup.evaluator.calibration();
    let rl = |log_k: f64| {
        (
            rl_strong_prob_log_threshold(Region::Theta1, n, delta, log_k),
            rl_strong_prob_log_threshold(Region::Theta2, n, delta, log_k),
        )
    };
    let point_bayes = || {
        setup
            .evaluator
            .bayes_prior()
            .filter(|q| q.q1 == WithinRegion::PointMass(t1) && q.q2 == WithinRegion::PointMass(t2))
    };
    let (p1, p2) = match measure {
        MeasureId::PValue => (
            gaussian_pvalue_strong_prob(Region::Theta1, n, delta, c.alpha_s).ok()?,
            gaussian_pvalue_strong_prob(Region::Theta2, n, delta, c.alpha_s).ok()?,
        ),
        MeasureId::Rl | MeasureId::Erl => rl(c.k_s.ln()),
        MeasureId::Bf => {
            point_bayes()?;
            rl(c.bf_threshold.ln())
        }
        MeasureId::PosteriorOdds => {
            let q = point_bayes()?;
            rl(c.odds_threshold.ln() - q.log_prior_odds_21().ok()?)
        }
    };
    exact_conditional_prob(p1, p2, setup.prior.w()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Calibration, EvidenceEvaluator};
    use crate::model::{GaussianMeanModel, HypothesisPair};
    use crate::sampler::{with_workers, TwoLevelPrior};

    fn setup(measures: &[MeasureId]) -> ReplicationSetup {
        let h = HypothesisPair::points(0.0, 1.0).unwrap();
        ReplicationSetup::new(
            GaussianMeanModel::default(),
            TwoLevelPrior::point_masses(0.5, &h).unwrap(),
            h,
            EvidenceEvaluator::new(measures, Calibration::default(), None).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn stream_ranges_do_not_overlap() {
        assert_eq!(stream_base_for(0), 0);
        assert_eq!(stream_base_for(1), 1 << 40);
        assert!(stream_base_for(2) > stream_base_for(1) + (1 << 39));
    }

    #[test]
    fn grid_validation() {
        let s = setup(&[MeasureId::Rl]);
        assert!(build_convergence_curves(&s, &[], 10, 1).is_err());
        assert!(build_convergence_curves(&s, &[4, 4], 10, 1).is_err());
        assert!(build_convergence_curves(&s, &[0, 4], 10, 1).is_err());
        assert!(build_convergence_curves(&s, &[4], 0, 1).is_err());
    }

    #[test]
    fn curves_match_collected_records_and_ignore_workers() {
        let s = setup(&[MeasureId::PValue, MeasureId::Rl]);
        let one = with_workers(1, || {
            build_convergence_curves(&s, &[4, 16], 3000, 9).unwrap()
        });
        let four = with_workers(4, || {
            build_convergence_curves(&s, &[4, 16], 3000, 9).unwrap()
        });
        assert_eq!(one, four);
        let recs = crate::sampler::run_replications(&s, 16, 3000, 9, stream_base_for(1)).unwrap();
        let direct = super::super::estimate_conditional_prob(&recs, MeasureId::Rl).unwrap();
        assert_eq!(one[1].rows[1].estimate, direct);
    }

    #[test]
    fn oracle_column_for_point_pairs() {
        let s = setup(&[MeasureId::PValue, MeasureId::Rl]);
        let rl16 = exact_oracle(&s, MeasureId::Rl, 16).unwrap();
        assert!((rl16 - 2.490056693e-3).abs() < 1e-11);
        let pv64 = exact_oracle(&s, MeasureId::PValue, 64).unwrap();
        assert!((pv64 - 0.009900990168).abs() < 1e-11);
        assert_eq!(exact_oracle(&s, MeasureId::Bf, 16), None);
    }
}
