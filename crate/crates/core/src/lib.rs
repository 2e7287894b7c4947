//! A Monte Carlo laboratory for measures of statistical evidence.
//!
//! The crate implements the p-value, the ratio of likelihoods, the extended
//! ratio of likelihoods, the Bayes factor and the posterior odds for a
//! univariate Gaussian mean model, together with the two-level sampling
//! mechanism (draw a parameter, then a dataset) used to estimate
//! `Pr(H1 | evidence against H1 is strong)` as the sample size grows.
//!
//! A measure is *consistent* when that conditional probability goes to zero.
//! The [`consistency`] module estimates it, tabulates convergence curves and
//! compares them with the closed-form Gaussian oracles.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod consistency;
mod error;
pub mod measures;
pub mod model;
pub mod numerics;
pub mod sampler;

pub use error::{Error, Result};
