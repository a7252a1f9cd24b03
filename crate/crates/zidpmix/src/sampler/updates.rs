//! Per-cluster conditional updates: conjugate draws for the outcome
//! regression and covariate models, Metropolis steps for the two logistic
//! blocks and for the concentration parameter.

use rand::Rng;

use crate::data::Dataset;
use crate::linalg::{chol_lt_solve, chol_solve, cholesky, dot};
use crate::model::log_expit;
use crate::params::CovariateParams;
use crate::prior::{draw_dirichlet, BasePrior, ConcentrationSpec, CovariatePrior, GaussianVecPrior};
use crate::real::Real;

use super::state::ClusterState;

/// Draw `(beta, phi)` from their exact conditionals given the cluster's
/// nonzero-outcome members (`ys`, `xs`): first `beta | phi` from the
/// Gaussian conjugate, then `phi | beta` from the inverse-gamma conjugate.
/// With no members both come straight from the prior.
pub fn update_beta_phi<T: Real, R: Rng + ?Sized>(
    ys: &[T],
    xs: &[&[T]],
    prior: &BasePrior<T>,
    current_phi: T,
    rng: &mut R,
) -> (Vec<T>, T) {
    debug_assert_eq!(ys.len(), xs.len());
    let dim = prior.beta.mean.len();

    // posterior precision A = Sigma0^{-1} + X'X / phi, rhs = Sigma0^{-1} mu0 + X'y / phi
    let mut a = vec![T::zero(); dim * dim];
    let mut rhs = vec![T::zero(); dim];
    for r in 0..dim {
        a[r * dim + r] = T::one() / prior.beta.var[r];
        rhs[r] = prior.beta.mean[r] / prior.beta.var[r];
    }
    let inv_phi = T::one() / current_phi;
    for (&y, &x) in ys.iter().zip(xs) {
        for r in 0..dim {
            rhs[r] += x[r] * y * inv_phi;
            for c in 0..dim {
                a[r * dim + c] += x[r] * x[c] * inv_phi;
            }
        }
    }
    cholesky(&mut a, dim).expect("posterior precision is positive definite");
    let mut mean = rhs;
    chol_solve(&a, dim, &mut mean);
    let mut draw: Vec<T> = (0..dim).map(|_| T::std_normal(rng)).collect();
    chol_lt_solve(&a, dim, &mut draw);
    let beta: Vec<T> = mean.iter().zip(&draw).map(|(&m, &d)| m + d).collect();

    let mut ssr = T::zero();
    for (&y, &x) in ys.iter().zip(xs) {
        let r = y - dot(x, &beta);
        ssr += r * r;
    }
    let half = T::of(0.5);
    let shape = prior.phi.shape + half * T::from_usize(ys.len()).unwrap();
    let rate = prior.phi.rate + half * ssr;
    let phi = T::one() / T::gamma_draw(shape, T::one() / rate, rng);

    (beta, phi)
}

/// Conjugate covariate-model update for one cluster. Continuous covariates
/// use two sub-steps (Gaussian mean given the current variance, then
/// inverse-gamma variance given the new mean); binary and categorical
/// covariates use Beta/Dirichlet counting updates. Empty clusters reduce to
/// prior draws.
pub fn update_theta<T: Real, R: Rng + ?Sized>(
    data: &Dataset<T>,
    members: &[usize],
    priors: &[CovariatePrior<T>],
    current: &[CovariateParams<T>],
    rng: &mut R,
) -> Vec<CovariateParams<T>> {
    let half = T::of(0.5);
    priors
        .iter()
        .zip(current)
        .enumerate()
        .map(|(j, (prior, cur))| match (prior, cur) {
            (
                CovariatePrior::Continuous {
                    mean0,
                    var0,
                    var_prior,
                },
                CovariateParams::Continuous { var, .. },
            ) => {
                let n = T::from_usize(members.len()).unwrap();
                let sum: T = members.iter().map(|&i| data.l_row(i)[j]).sum();
                let prec = T::one() / *var0 + n / *var;
                let post_var = T::one() / prec;
                let post_mean = post_var * (*mean0 / *var0 + sum / *var);
                let mean = post_mean + post_var.sqrt() * T::std_normal(rng);

                let mut ss = T::zero();
                for &i in members {
                    let d = data.l_row(i)[j] - mean;
                    ss += d * d;
                }
                let shape = var_prior.shape + half * n;
                let rate = var_prior.rate + half * ss;
                let var = T::one() / T::gamma_draw(shape, T::one() / rate, rng);
                CovariateParams::Continuous { mean, var }
            }
            (CovariatePrior::Binary { a, b }, CovariateParams::Binary { .. }) => {
                let ones: usize = members
                    .iter()
                    .filter(|&&i| data.l_row(i)[j] == T::one())
                    .count();
                let zeros = members.len() - ones;
                CovariateParams::Binary {
                    p: T::beta_draw(
                        *a + T::from_usize(ones).unwrap(),
                        *b + T::from_usize(zeros).unwrap(),
                        rng,
                    ),
                }
            }
            (
                CovariatePrior::Categorical { concentration },
                CovariateParams::Categorical { .. },
            ) => {
                let mut conc = concentration.clone();
                for &i in members {
                    let level = data.l_row(i)[j].as_f64() as usize;
                    conc[level] += T::one();
                }
                CovariateParams::Categorical {
                    probs: draw_dirichlet(&conc, rng),
                }
            }
            _ => unreachable!("covariate prior/parameter kinds match the schema"),
        })
        .collect()
}

fn logistic_log_posterior<T: Real>(
    targets: &[u8],
    rows: &[&[T]],
    prior: &GaussianVecPrior<T>,
    coef: &[T],
) -> T {
    let mut ll = prior.log_density(coef);
    for (&t, &row) in targets.iter().zip(rows) {
        let lp = dot(row, coef);
        ll += if t == 1 { log_expit(lp) } else { log_expit(-lp) };
    }
    ll
}

/// One Metropolis step on a logistic coefficient block: propose
/// `coef + N(0, jump_sd^2 I)`, accept with probability
/// `min(1, exp(delta log posterior))`. Returns the retained coefficients
/// and whether the proposal was accepted.
pub fn update_logistic_block<T: Real, R: Rng + ?Sized>(
    targets: &[u8],
    rows: &[&[T]],
    prior: &GaussianVecPrior<T>,
    current: &[T],
    jump_sd: T,
    rng: &mut R,
) -> (Vec<T>, bool) {
    debug_assert_eq!(targets.len(), rows.len());
    let proposal: Vec<T> = current
        .iter()
        .map(|&c| c + jump_sd * T::std_normal(rng))
        .collect();
    let lp_current = logistic_log_posterior(targets, rows, prior, current);
    let lp_proposal = logistic_log_posterior(targets, rows, prior, &proposal);
    let accept = T::open01(rng).ln() < lp_proposal - lp_current;
    if accept {
        (proposal, true)
    } else {
        (current.to_vec(), false)
    }
}

/// Metropolis update of the concentration parameter on the log scale.
///
/// The target is `prior(alpha) * p(K, n | alpha)` with
/// `p(K, n | alpha) = alpha^K Gamma(alpha) / Gamma(alpha + n)`; the log
/// transform contributes a `+log(alpha)` Jacobian term. A fixed
/// concentration is returned unchanged (`None` acceptance).
pub fn update_alpha<T: Real, R: Rng + ?Sized>(
    state: &ClusterState<T>,
    conc: &ConcentrationSpec<T>,
    rng: &mut R,
) -> (T, Option<bool>) {
    let jump_sd = match conc {
        ConcentrationSpec::Fixed { alpha } => return (*alpha, None),
        ConcentrationSpec::GammaPrior { jump_sd, .. }
        | ConcentrationSpec::InvGammaPrior { jump_sd, .. } => *jump_sd,
    };
    let k = T::from_usize(state.k()).unwrap();
    let n = T::from_usize(state.n()).unwrap();
    let log_target = |log_alpha: T| {
        let alpha = log_alpha.exp();
        conc.log_prior(alpha) + log_alpha // Jacobian
            + k * log_alpha
            + alpha.ln_gamma()
            - (alpha + n).ln_gamma()
    };
    let current = state.alpha().ln();
    let proposal = current + jump_sd * T::std_normal(rng);
    let accept = T::open01(rng).ln() < log_target(proposal) - log_target(current);
    if accept {
        (proposal.exp(), Some(true))
    } else {
        (state.alpha(), Some(false))
    }
}
