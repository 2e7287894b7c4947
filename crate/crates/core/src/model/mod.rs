//! Statistical models `f(x | theta)` with their hypothesis partitions.
//!
//! Only the univariate Gaussian mean model ships. Measures talk to it through
//! the [`Model`] trait, so another model only has to provide simulation,
//! likelihood evaluation and restricted maximum likelihood.

mod gaussian;
mod region;
mod sample;

pub use gaussian::GaussianMeanModel;
pub use region::{HypothesisPair, Interval, ParameterRegion};
pub use sample::{Sample, SufficientStats};

use crate::numerics::RandomStream;
use crate::Result;

/// Maximiser of the likelihood over a region.
///
/// On an open endpoint the supremum is only approached; `theta` then holds
/// the endpoint and `attained` is false.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedMle {
    pub theta: f64,
    pub attained: bool,
}

pub trait Model: Send + Sync {
    /// `n` i.i.d. observations drawn at `theta`.
    fn simulate_sample(&self, theta: f64, n: usize, stream: &mut RandomStream) -> Result<Sample>;

    /// A draw of the sufficient statistic only, equal in law to summarising
    /// [`Model::simulate_sample`].
    fn simulate_sufficient_stat(
        &self,
        theta: f64,
        n: usize,
        stream: &mut RandomStream,
    ) -> Result<SufficientStats>;

    /// Full log-likelihood. Needs the within-sample spread, which the
    /// sufficient-statistic fast path does not carry.
    fn log_likelihood(&self, theta: f64, stats: &SufficientStats) -> Result<f64>;

    /// `log f(x | theta) - sup_theta log f(x | theta)`: the theta-dependent part
    /// of the log-likelihood. All likelihood ratios are differences of this.
    fn relative_log_likelihood(&self, theta: f64, stats: &SufficientStats) -> f64;

    fn restricted_mle(&self, stats: &SufficientStats, region: &ParameterRegion) -> RestrictedMle;

    /// Width of the likelihood in theta (the standard error of the MLE).
    /// Used to place quadrature panels.
    fn likelihood_scale(&self, stats: &SufficientStats) -> f64;
}
