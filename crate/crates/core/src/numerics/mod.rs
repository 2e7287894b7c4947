//! Scalar numerics shared by every stochastic and analytic path: the
//! standard normal primitives, log-space summation, Gauss-Legendre rules and
//! the reproducible random-stream contract.

mod logspace;
mod normal;
mod quadrature;
mod stream;

pub use logspace::log_sum_exp;
pub(crate) use logspace::log_sum_exp_unchecked;
pub use normal::{
    gaussian_log_density, normal_interval_mass, std_normal_cdf, std_normal_pdf,
    std_normal_quantile, std_normal_upper_tail,
};
pub(crate) use normal::{phi, phi_upper};
pub use quadrature::GaussLegendre;
pub use stream::{sample_standard_normal, RandomStream};
