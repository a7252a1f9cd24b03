//! Per-subject log-likelihood under one cluster's parameters.
//!
//! The joint density of one subject factors into
//!
//! ```text
//! [ pi(x'gamma)^z * ((1 - pi(x'gamma)) * N(y | x'beta, phi))^(1-z) ]   outcome
//! * Ber(a | expit(m'eta))                                             treatment
//! * p(l | theta)                                                      covariates
//! ```
//!
//! with `pi = expit`. Everything is evaluated in log space; cluster
//! likelihood ratios on cost-scale data span hundreds of orders of
//! magnitude otherwise.

use crate::data::Dataset;
use crate::linalg::dot;
use crate::params::{ClusterParams, CovariateParams};
use crate::real::Real;

/// Logistic function.
pub fn expit<T: Real>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// `ln(expit(x))`, stable in both tails.
pub fn log_expit<T: Real>(x: T) -> T {
    if x >= T::zero() {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Gaussian log density.
pub fn normal_logpdf<T: Real>(y: T, mean: T, var: T) -> T {
    let half = T::of(0.5);
    let two_pi = T::of(std::f64::consts::TAU);
    let r = y - mean;
    -half * ((two_pi * var).ln() + r * r / var)
}

/// Log density of a raw covariate row under the cluster's covariate model.
pub fn covariate_loglik<T: Real>(l_row: &[T], theta: &[CovariateParams<T>]) -> T {
    debug_assert_eq!(l_row.len(), theta.len());
    let mut acc = T::zero();
    for (&v, th) in l_row.iter().zip(theta) {
        acc += match th {
            CovariateParams::Continuous { mean, var } => normal_logpdf(v, *mean, *var),
            CovariateParams::Binary { p } => {
                if v == T::one() {
                    p.ln()
                } else {
                    (T::one() - *p).ln()
                }
            }
            CovariateParams::Categorical { probs } => probs[v.as_f64() as usize].ln(),
        };
    }
    acc
}

/// Two-part outcome factor only: the zero-model Bernoulli plus, for nonzero
/// outcomes, the Gaussian density. This is the part of the likelihood the
/// `beta`, `phi` and `gamma` updates condition on.
pub fn loglik_outcome_only<T: Real>(data: &Dataset<T>, i: usize, w: &ClusterParams<T>) -> T {
    let x = data.x_row(i);
    let lp_zero = dot(x, &w.gamma);
    if data.z(i) == 1 {
        log_expit(lp_zero)
    } else {
        log_expit(-lp_zero) + normal_logpdf(data.y(i), dot(x, &w.beta), w.phi)
    }
}

/// Full per-subject log likelihood: outcome, treatment and covariate factors.
pub fn loglik_subject<T: Real>(data: &Dataset<T>, i: usize, w: &ClusterParams<T>) -> T {
    let lp_treat = dot(data.m_row(i), &w.eta);
    let treat = if data.a(i) == 1 {
        log_expit(lp_treat)
    } else {
        log_expit(-lp_treat)
    };
    loglik_outcome_only(data, i, w) + treat + covariate_loglik(data.l_row(i), &w.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{CovariateKind, CovariateSchema};

    fn schema() -> CovariateSchema {
        CovariateSchema::new(vec![("l1".into(), CovariateKind::Continuous)]).unwrap()
    }

    fn params(beta: Vec<f64>, phi: f64, gamma: Vec<f64>, eta: Vec<f64>) -> ClusterParams<f64> {
        ClusterParams {
            beta,
            phi,
            gamma,
            eta,
            theta: vec![CovariateParams::Continuous { mean: 0.0, var: 1.0 }],
        }
    }

    #[test]
    fn zero_branch_at_even_odds_is_log_half() {
        // z = 1 and x'gamma = 0 -> outcome factor log(0.5), independent of beta/phi
        let d = Dataset::new(schema(), vec![0.0], vec![0], vec![0.3]).unwrap();
        let w1 = params(vec![5.0, -3.0, 2.0], 0.01, vec![0.0; 3], vec![0.0; 2]);
        let w2 = params(vec![0.0; 3], 100.0, vec![0.0; 3], vec![0.0; 2]);
        let expected = 0.5f64.ln();
        assert!((loglik_outcome_only(&d, 0, &w1) - expected).abs() < 1e-12);
        assert!((loglik_outcome_only(&d, 0, &w2) - expected).abs() < 1e-12);
    }

    #[test]
    fn treatment_factor_at_even_odds_is_log_half() {
        let d = Dataset::new(schema(), vec![1.0], vec![1], vec![0.3]).unwrap();
        let w = params(vec![0.0; 3], 1.0, vec![0.0; 3], vec![0.0; 2]);
        let treat_part = loglik_subject(&d, 0, &w)
            - loglik_outcome_only(&d, 0, &w)
            - covariate_loglik(d.l_row(0), &w.theta);
        assert!((treat_part - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn nonzero_outcome_at_mode() {
        // z = 0 and y = x'beta -> log(1 - pi) - 0.5 * log(2 pi phi)
        let phi = 0.7;
        let w = params(vec![1.0, 0.5, 2.0], phi, vec![0.3, -0.2, 0.1], vec![0.0; 2]);
        let l1 = 0.4;
        let y = 1.0 + 0.5 + 2.0 * l1;
        let d = Dataset::new(schema(), vec![y], vec![1], vec![l1]).unwrap();
        let lp_zero = 0.3 - 0.2 + 0.1 * l1;
        let expected = log_expit(-lp_zero) - 0.5 * (std::f64::consts::TAU * phi).ln();
        assert!((loglik_outcome_only(&d, 0, &w) - expected).abs() < 1e-12);
    }

    #[test]
    fn full_loglik_matches_sum_of_component_oracles() {
        // independent scalar-density oracle via statrs
        use statrs::distribution::{Continuous, Normal};
        let schema = CovariateSchema::new(vec![
            ("l1".into(), CovariateKind::Continuous),
            ("l2".into(), CovariateKind::Binary),
            ("l3".into(), CovariateKind::Categorical(3)),
        ])
        .unwrap();
        let l = vec![0.8, 1.0, 2.0];
        let y = 3.2;
        let d = Dataset::new(schema, vec![y], vec![1], l.clone()).unwrap();
        let w = ClusterParams {
            beta: vec![0.5, 1.0, -0.3, 0.2, 0.4, -0.1],
            phi: 2.5,
            gamma: vec![-0.4, 0.3, 0.1, -0.2, 0.05, 0.15],
            eta: vec![0.2, -0.5, 0.3, 0.1, -0.2],
            theta: vec![
                CovariateParams::Continuous { mean: 0.5, var: 1.2 },
                CovariateParams::Binary { p: 0.7 },
                CovariateParams::Categorical {
                    probs: vec![0.2, 0.3, 0.5],
                },
            ],
        };
        // design: x = (1, 1, 0.8, 1.0, 0, 1), m = (1, 0.8, 1.0, 0, 1)
        let x = [1.0, 1.0, 0.8, 1.0, 0.0, 1.0];
        let m = [1.0, 0.8, 1.0, 0.0, 1.0];
        let lp_zero: f64 = x.iter().zip(&w.gamma).map(|(a, b)| a * b).sum();
        let lp_treat: f64 = m.iter().zip(&w.eta).map(|(a, b)| a * b).sum();
        let mean_y: f64 = x.iter().zip(&w.beta).map(|(a, b)| a * b).sum();

        let pi = 1.0 / (1.0 + (-lp_zero).exp());
        let p_treat = 1.0 / (1.0 + (-lp_treat).exp());
        let outcome = (1.0 - pi).ln()
            + Normal::new(mean_y, 2.5f64.sqrt()).unwrap().ln_pdf(y);
        let treat = p_treat.ln();
        let cov = Normal::new(0.5, 1.2f64.sqrt()).unwrap().ln_pdf(0.8)
            + 0.7f64.ln()
            + 0.5f64.ln();
        let expected = outcome + treat + cov;
        assert!((loglik_subject(&d, 0, &w) - expected).abs() < 1e-10);
    }

    #[test]
    fn outcome_only_is_subject_minus_other_factors() {
        let d = Dataset::new(schema(), vec![1.7], vec![0], vec![-0.6]).unwrap();
        let w = params(
            vec![0.3, -0.1, 0.9],
            1.3,
            vec![0.2, 0.1, -0.4],
            vec![-0.3, 0.6],
        );
        let lp_treat = -0.3 + 0.6 * -0.6;
        let treat = log_expit(-lp_treat);
        let cov = covariate_loglik(d.l_row(0), &w.theta);
        let diff = loglik_subject(&d, 0, &w) - treat - cov;
        assert!((loglik_outcome_only(&d, 0, &w) - diff).abs() < 1e-12);
    }

    #[test]
    fn outcome_mixed_measure_normalizes() {
        // pi + (1 - pi) * integral N(y | mu, phi) dy == 1, Gaussian integral
        // evaluated by Simpson quadrature over +/- 12 sd.
        let w = params(vec![0.4, 0.0, -0.2], 0.9, vec![0.7, 0.0, 0.3], vec![0.0; 2]);
        let l1 = 0.25;
        let mu = 0.4 - 0.2 * l1;
        let lp_zero = 0.7 + 0.3 * l1;
        let pi = expit(lp_zero);
        let sd = 0.9f64.sqrt();
        let (lo, hi) = (mu - 12.0 * sd, mu + 12.0 * sd);
        let steps = 20_000usize;
        let h = (hi - lo) / steps as f64;
        let mut integral = 0.0;
        for k in 0..=steps {
            let y = lo + h * k as f64;
            let f = normal_logpdf(y, mu, 0.9).exp();
            let c = if k == 0 || k == steps {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            integral += c * f;
        }
        integral *= h / 3.0;
        let total = pi + (1.0 - pi) * integral;
        assert!((total - 1.0).abs() < 1e-6, "total {total}");
    }

    #[test]
    fn monotone_in_zero_linear_predictor() {
        // larger x'gamma: z=1 branch increases, z=0 branch decreases
        let schema = schema();
        let d_zero = Dataset::new(schema.clone(), vec![0.0], vec![0], vec![0.0]).unwrap();
        let d_pos = Dataset::new(schema, vec![1.0], vec![0], vec![0.0]).unwrap();
        let mut prev_zero = f64::NEG_INFINITY;
        let mut prev_pos = f64::INFINITY;
        for intercept in [-2.0, -0.5, 0.0, 1.0, 3.0] {
            let w = params(vec![1.0, 0.0, 0.0], 1.0, vec![intercept, 0.0, 0.0], vec![0.0; 2]);
            let lz = loglik_outcome_only(&d_zero, 0, &w);
            let lp = loglik_outcome_only(&d_pos, 0, &w);
            assert!(lz > prev_zero);
            assert!(lp < prev_pos);
            prev_zero = lz;
            prev_pos = lp;
        }
    }
}
