//! Estimating `Pr(H1 | evidence in S)` from replications, exact values for
//! the Gaussian point example, and verdicts against a limit.

mod curve;
mod estimate;
mod oracle;
mod verdict;

pub use curve::{
    build_convergence_curves, check_n_grid, exact_oracle, stream_base_for, ConvergenceCurve,
    CurveRow,
};
pub use estimate::{estimate_conditional_prob, ConsistencyEstimate, Tally};
pub use oracle::{
    exact_conditional_prob, gaussian_pvalue_strong_prob, gaussian_rl_strong_prob, pvalue_limit,
};
pub use verdict::{verdict, TolerancePolicy, Verdict};
