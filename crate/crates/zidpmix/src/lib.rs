//! Dirichlet process mixtures of zero-inflated regressions.
//!
//! This crate implements a Bayesian nonparametric generative model for
//! continuous, zero-inflated outcomes. Each mixture component is a joint
//! model over one "cluster" of subjects:
//!
//! * a two-part outcome model — a logistic regression for the probability
//!   of an exact zero and a Gaussian regression for nonzero values,
//! * a logistic treatment-assignment model,
//! * a parametric covariate model (Gaussian / Bernoulli / categorical per
//!   covariate).
//!
//! A Dirichlet process prior over the component parameters lets the number
//! of clusters grow with the data. On top of the fitted posterior the crate
//! provides:
//!
//! * a Metropolis-in-Gibbs sampler with auxiliary-parameter cluster
//!   assignment updates ([`sampler`]),
//! * label-switching-free posterior-mode clustering via co-clustering
//!   adjacency matrices ([`clustering`]),
//! * Monte Carlo standardization for causal contrasts (mean, quantile and
//!   zero-probability effects) and posterior predictive propensity scores
//!   for positivity diagnostics ([`causal`]),
//! * the two synthetic data-generating processes and the bias/coverage
//!   experiment runner used to validate the estimator ([`sim`],
//!   [`experiment`]).
//!
//! All numerics are generic over the floating-point scalar through the
//! [`Real`] trait; `f64` is the intended default and concrete aliases for
//! the main types are exported at the crate root.

pub mod causal;
pub mod clustering;
pub mod data;
pub mod error;
pub mod experiment;
mod linalg;
pub mod model;
#[cfg(feature = "test-oracles")]
pub mod oracles;
pub mod params;
pub mod prior;
pub mod real;
pub mod sampler;
pub mod schema;
pub mod sim;
pub mod stats;

pub use error::Error;
pub use real::Real;

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;

pub type Dataset64 = data::Dataset<f64>;
pub type Dataset32 = data::Dataset<f32>;
pub type ClusterParams64 = params::ClusterParams<f64>;
pub type BasePrior64 = prior::BasePrior<f64>;
pub type ConcentrationSpec64 = prior::ConcentrationSpec<f64>;
pub type SamplerConfig64 = sampler::SamplerConfig<f64>;
pub type PosteriorTrace64 = sampler::PosteriorTrace<f64>;
pub type ClusterState64 = sampler::ClusterState<f64>;
pub type CausalResults64 = causal::CausalResults<f64>;
pub type StandardizationConfig64 = causal::StandardizationConfig<f64>;
