use super::bayes::log_marginal_likelihood_over;
use super::likelihood::log_sup_likelihood;
use super::prior::WithinRegion;
use super::MeasureId;
use crate::model::{Model, ParameterRegion, SufficientStats};
use crate::numerics::log_sum_exp_unchecked;
use crate::{Error, Result};

/// `Theta` strictly inside `Theta'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedPair {
    pub inner: ParameterRegion,
    pub outer: ParameterRegion,
}

impl NestedPair {
    pub fn new(inner: ParameterRegion, outer: ParameterRegion) -> Result<Self> {
        if !inner.is_subset_of(&outer) || inner == outer {
            return Err(Error::domain(format!(
                "{inner} is not strictly contained in {outer}"
            )));
        }
        Ok(Self { inner, outer })
    }
}

/// The real line cut at every finite endpoint of both regions. Each cell is
/// either inside or outside each region, so region masses are sums over
/// cells and inclusion carries over exactly to the floating-point sums.
struct Cells {
    bounds: Vec<(f64, f64)>,
    in_inner: Vec<bool>,
    in_outer: Vec<bool>,
}

impl Cells {
    fn new(pair: &NestedPair) -> Self {
        let mut cuts: Vec<f64> = [pair.inner.bounds(), pair.outer.bounds()]
            .into_iter()
            .flat_map(|(a, b)| [a, b])
            .filter(|x| x.is_finite())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend(cuts);
        edges.push(f64::INFINITY);
        let bounds: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
        let interior = |(a, b): (f64, f64)| match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a + b),
            (false, true) => b - 1.0,
            (true, false) => a + 1.0,
            (false, false) => 0.0,
        };
        let in_inner = bounds
            .iter()
            .map(|&c| pair.inner.contains(interior(c)))
            .collect();
        let in_outer = bounds
            .iter()
            .map(|&c| pair.outer.contains(interior(c)))
            .collect();
        Self {
            bounds,
            in_inner,
            in_outer,
        }
    }

    /// log of the summed cell values inside (or outside) a region.
    fn log_total(values: &[f64], member: &[bool], inside: bool) -> f64 {
        log_sum_exp_unchecked(
            values
                .iter()
                .zip(member)
                .filter(|(_, m)| **m == inside)
                .map(|(v, _)| (*v, 1.0)),
        )
    }
}

/// Counts the samples for which `measure` gives strictly stronger evidence to
/// `Theta` than to the larger `Theta'`. Evidence for a region is measured
/// against its complement: log posterior odds, log Bayes factor, or log
/// extended ratio of likelihoods with the region as numerator.
///
/// `prior` is a distribution over the whole parameter line, needed by the
/// Bayes factor and the posterior odds.
pub fn coherence_audit<M: Model + ?Sized>(
    model: &M,
    measure: MeasureId,
    nested: &NestedPair,
    samples: &[SufficientStats],
    prior: Option<&WithinRegion>,
) -> Result<usize> {
    match measure {
        MeasureId::PValue => {
            return Err(Error::unsupported(
                "coherence audit of the p-value: nesting of one-sided null regions has no \
                 expressible counterexample in the one-sided mean test",
            ))
        }
        MeasureId::Rl => {
            return Err(Error::unsupported(
                "coherence audit of the ratio of likelihoods: point hypotheses cannot be strictly nested",
            ))
        }
        MeasureId::Erl | MeasureId::Bf | MeasureId::PosteriorOdds => {}
    }
    let needs_prior = matches!(measure, MeasureId::Bf | MeasureId::PosteriorOdds);
    let prior = match (needs_prior, prior) {
        (true, None) => {
            return Err(Error::domain(format!(
                "coherence audit of {measure} needs a prior"
            )))
        }
        (true, Some(q)) if q.is_point_mass() => {
            return Err(Error::unsupported(format!(
                "coherence audit of {measure} needs a prior with a density"
            )))
        }
        (_, q) => q,
    };

    let cells = Cells::new(nested);
    let inner_complement = nested.inner.complement();
    let outer_complement = nested.outer.complement();
    let prior_cell_mass: Vec<f64> = match prior {
        Some(q) => cells
            .bounds
            .iter()
            .map(|&(a, b)| q.log_mass(a, b))
            .collect(),
        None => Vec::new(),
    };

    let mut violations = 0;
    for stats in samples {
        let (inner, outer) = match measure {
            MeasureId::Erl => (
                log_sup_likelihood(model, stats, &[nested.inner])
                    - log_sup_likelihood(model, stats, &inner_complement),
                log_sup_likelihood(model, stats, &[nested.outer])
                    - log_sup_likelihood(model, stats, &outer_complement),
            ),
            _ => {
                let q = prior.expect("checked above");
                let marginal: Vec<f64> = cells
                    .bounds
                    .iter()
                    .map(|&(a, b)| {
                        log_marginal_likelihood_over(model, stats, q, a, b).map(|m| m.log_value)
                    })
                    .collect::<Result<_>>()?;
                let evidence = |member: &[bool]| {
                    let odds = Cells::log_total(&marginal, member, true)
                        - Cells::log_total(&marginal, member, false);
                    if measure == MeasureId::Bf {
                        odds - (Cells::log_total(&prior_cell_mass, member, true)
                            - Cells::log_total(&prior_cell_mass, member, false))
                    } else {
                        odds
                    }
                };
                (evidence(&cells.in_inner), evidence(&cells.in_outer))
            }
        };
        if inner > outer {
            violations += 1;
        }
    }
    Ok(violations)
}
