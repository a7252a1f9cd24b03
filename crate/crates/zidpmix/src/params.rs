//! Cluster-level parameters of the generative model.

use crate::error::Error;
use crate::real::Real;
use crate::schema::{CovariateKind, CovariateSchema};
use crate::Result;

/// Parameters of one covariate's marginal model.
#[derive(Debug, Clone, PartialEq)]
pub enum CovariateParams<T> {
    Continuous { mean: T, var: T },
    Binary { p: T },
    Categorical { probs: Vec<T> },
}

/// One cluster's full parameter set.
///
/// * `beta` — outcome regression coefficients, length `p + 2`
///   (intercept, treatment, expanded covariates)
/// * `phi` — outcome variance
/// * `gamma` — zero-probability logistic coefficients, length `p + 2`
/// * `eta` — treatment logistic coefficients, length `p + 1`
/// * `theta` — covariate model parameters, one entry per covariate
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterParams<T> {
    pub beta: Vec<T>,
    pub phi: T,
    pub gamma: Vec<T>,
    pub eta: Vec<T>,
    pub theta: Vec<CovariateParams<T>>,
}

const SIMPLEX_TOL: f64 = 1e-12;

impl<T: Real> ClusterParams<T> {
    /// Check coefficient lengths, positivity and simplex constraints against
    /// a schema.
    pub fn validate(&self, schema: &CovariateSchema) -> Result<()> {
        let p = schema.encoded_len();
        if self.beta.len() != p + 2 {
            return Err(Error::Schema(format!(
                "beta has {} coefficients, expected {}",
                self.beta.len(),
                p + 2
            )));
        }
        if self.gamma.len() != p + 2 {
            return Err(Error::Schema(format!(
                "gamma has {} coefficients, expected {}",
                self.gamma.len(),
                p + 2
            )));
        }
        if self.eta.len() != p + 1 {
            return Err(Error::Schema(format!(
                "eta has {} coefficients, expected {}",
                self.eta.len(),
                p + 1
            )));
        }
        if !(self.phi > T::zero() && self.phi.is_finite()) {
            return Err(Error::Schema(format!("phi must be positive, got {}", self.phi)));
        }
        for v in self.beta.iter().chain(&self.gamma).chain(&self.eta) {
            if !v.is_finite() {
                return Err(Error::Schema("non-finite regression coefficient".into()));
            }
        }
        if self.theta.len() != schema.n_raw() {
            return Err(Error::Schema(format!(
                "theta has {} entries, schema declares {} covariates",
                self.theta.len(),
                schema.n_raw()
            )));
        }
        for ((name, kind), theta) in schema.entries().iter().zip(&self.theta) {
            match (kind, theta) {
                (CovariateKind::Continuous, CovariateParams::Continuous { var, .. }) => {
                    if !(*var > T::zero() && var.is_finite()) {
                        return Err(Error::Schema(format!(
                            "covariate `{name}`: variance must be positive"
                        )));
                    }
                }
                (CovariateKind::Binary, CovariateParams::Binary { p }) => {
                    if !(*p > T::zero() && *p < T::one()) {
                        return Err(Error::Schema(format!(
                            "covariate `{name}`: probability must be in (0, 1)"
                        )));
                    }
                }
                (CovariateKind::Categorical(levels), CovariateParams::Categorical { probs }) => {
                    if probs.len() != *levels {
                        return Err(Error::Schema(format!(
                            "covariate `{name}`: {} probabilities for {levels} levels",
                            probs.len()
                        )));
                    }
                    let mut sum = T::zero();
                    for &q in probs {
                        if !(q > T::zero() && q < T::one()) {
                            return Err(Error::Schema(format!(
                                "covariate `{name}`: level probabilities must be in (0, 1)"
                            )));
                        }
                        sum += q;
                    }
                    if (sum - T::one()).abs() > T::of(SIMPLEX_TOL) {
                        return Err(Error::Schema(format!(
                            "covariate `{name}`: probabilities sum to {sum}, not 1"
                        )));
                    }
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "covariate `{name}`: parameter kind does not match schema"
                    )));
                }
            }
        }
        Ok(())
    }
}
