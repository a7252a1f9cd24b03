//! Base distribution of the Dirichlet process and the concentration
//! parameter prior.

use rand::Rng;

use crate::data::Dataset;
use crate::error::Error;
use crate::linalg::{cholesky, chol_solve, dot};
use crate::params::{ClusterParams, CovariateParams};
use crate::real::Real;
use crate::schema::{CovariateKind, CovariateSchema};
use crate::Result;

/// Independent Gaussian prior per coefficient (a diagonal-covariance
/// multivariate normal).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVecPrior<T> {
    pub mean: Vec<T>,
    pub var: Vec<T>,
}

impl<T: Real> GaussianVecPrior<T> {
    pub fn isotropic(dim: usize, mean: T, var: T) -> Self {
        Self {
            mean: vec![mean; dim],
            var: vec![var; dim],
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.mean
            .iter()
            .zip(&self.var)
            .map(|(&m, &v)| m + v.sqrt() * T::std_normal(rng))
            .collect()
    }

    pub fn log_density(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for ((&m, &v), &xi) in self.mean.iter().zip(&self.var).zip(x) {
            acc += crate::model::normal_logpdf(xi, m, v);
        }
        acc
    }
}

/// Inverse-gamma prior with density proportional to
/// `x^{-(shape+1)} exp(-rate / x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvGammaPrior<T> {
    pub shape: T,
    pub rate: T,
}

impl<T: Real> InvGammaPrior<T> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        // 1 / Gamma(shape, scale = 1/rate)
        T::one() / T::gamma_draw(self.shape, T::one() / self.rate, rng)
    }

    pub fn mean(&self) -> Option<T> {
        (self.shape > T::one()).then(|| self.rate / (self.shape - T::one()))
    }
}

/// Prior for one covariate's marginal model.
#[derive(Debug, Clone, PartialEq)]
pub enum CovariatePrior<T> {
    /// Gaussian hyperprior on the mean and inverse-gamma on the variance.
    Continuous {
        mean0: T,
        var0: T,
        var_prior: InvGammaPrior<T>,
    },
    /// Beta prior on the success probability.
    Binary { a: T, b: T },
    /// Dirichlet prior over level probabilities.
    Categorical { concentration: Vec<T> },
}

impl<T: Real> CovariatePrior<T> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> CovariateParams<T> {
        match self {
            CovariatePrior::Continuous {
                mean0,
                var0,
                var_prior,
            } => CovariateParams::Continuous {
                mean: *mean0 + var0.sqrt() * T::std_normal(rng),
                var: var_prior.draw(rng),
            },
            CovariatePrior::Binary { a, b } => CovariateParams::Binary {
                p: T::beta_draw(*a, *b, rng),
            },
            CovariatePrior::Categorical { concentration } => CovariateParams::Categorical {
                probs: draw_dirichlet(concentration, rng),
            },
        }
    }
}

/// Dirichlet draw via normalized gamma variates.
pub fn draw_dirichlet<T: Real, R: Rng + ?Sized>(concentration: &[T], rng: &mut R) -> Vec<T> {
    let mut g: Vec<T> = concentration
        .iter()
        .map(|&c| T::gamma_draw(c, T::one(), rng))
        .collect();
    let total = g.iter().cloned().sum::<T>();
    for v in &mut g {
        *v /= total;
    }
    g
}

/// The base distribution `G0`: independent priors over every block of a
/// cluster's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePrior<T> {
    pub beta: GaussianVecPrior<T>,
    pub phi: InvGammaPrior<T>,
    pub gamma: GaussianVecPrior<T>,
    pub eta: GaussianVecPrior<T>,
    pub covariates: Vec<CovariatePrior<T>>,
}

impl<T: Real> BasePrior<T> {
    /// Weakly informative default for unit-scale data: zero-mean coefficient
    /// priors with variance 2 on the logistic blocks and variance 100 on the
    /// outcome block.
    pub fn default_for(schema: &CovariateSchema) -> Self {
        let p = schema.encoded_len();
        Self {
            beta: GaussianVecPrior::isotropic(p + 2, T::zero(), T::of(100.0)),
            phi: InvGammaPrior {
                shape: T::of(2.0),
                rate: T::of(1.0),
            },
            gamma: GaussianVecPrior::isotropic(p + 2, T::zero(), T::of(2.0)),
            eta: GaussianVecPrior::isotropic(p + 1, T::zero(), T::of(2.0)),
            covariates: schema
                .entries()
                .iter()
                .map(|(_, kind)| match kind {
                    CovariateKind::Continuous => CovariatePrior::Continuous {
                        mean0: T::zero(),
                        var0: T::of(10.0),
                        var_prior: InvGammaPrior {
                            shape: T::of(2.0),
                            rate: T::of(1.0),
                        },
                    },
                    CovariateKind::Binary => CovariatePrior::Binary {
                        a: T::one(),
                        b: T::one(),
                    },
                    CovariateKind::Categorical(levels) => CovariatePrior::Categorical {
                        concentration: vec![T::one(); *levels],
                    },
                })
                .collect(),
        }
    }

    /// Empirically calibrated prior:
    ///
    /// * `beta` centered at the least-squares fit on nonzero outcomes with
    ///   variance 100x the fit's diagonal covariance,
    /// * `phi` inverse-gamma centered at the residual variance,
    /// * logistic blocks `N(0, 2)`,
    /// * continuous covariates centered at the sample mean with a (10 x sd)^2
    ///   hypervariance and an inverse-gamma variance prior centered at the
    ///   sample variance; Beta(1,1)/Dirichlet(1) for binary/categorical.
    pub fn empirical(data: &Dataset<T>) -> Result<Self> {
        let schema = data.schema();
        let p = schema.encoded_len();
        let dim = p + 2;
        let nonzero: Vec<usize> = (0..data.n()).filter(|&i| data.z(i) == 0).collect();
        if nonzero.len() < dim + 1 {
            return Err(Error::Config(format!(
                "empirical prior calibration needs more than {} nonzero outcomes, found {}",
                dim,
                nonzero.len()
            )));
        }

        // normal equations for the OLS fit on nonzero outcomes
        let mut xtx = vec![T::zero(); dim * dim];
        let mut xty = vec![T::zero(); dim];
        for &i in &nonzero {
            let x = data.x_row(i);
            let y = data.y(i);
            for r in 0..dim {
                xty[r] += x[r] * y;
                for c in 0..dim {
                    xtx[r * dim + c] += x[r] * x[c];
                }
            }
        }
        let mut chol = xtx.clone();
        if cholesky(&mut chol, dim).is_err() {
            // collinear design: fall back to a ridge-stabilized fit
            let mut trace = T::zero();
            for r in 0..dim {
                trace += xtx[r * dim + r];
            }
            let ridge = trace / T::from_usize(dim).unwrap() * T::of(1e-8);
            chol = xtx.clone();
            for r in 0..dim {
                chol[r * dim + r] += ridge;
            }
            cholesky(&mut chol, dim).map_err(|_| {
                Error::Config("empirical prior calibration: design matrix is singular".into())
            })?;
        }
        let mut coef = xty.clone();
        chol_solve(&chol, dim, &mut coef);

        let mut ssr = T::zero();
        for &i in &nonzero {
            let r = data.y(i) - dot(data.x_row(i), &coef);
            ssr += r * r;
        }
        let dof = nonzero.len().saturating_sub(dim).max(1);
        let sigma2 = ssr / T::from_usize(dof).unwrap();

        // diagonal of sigma2 * (X'X)^{-1}, scaled by 100
        let mut beta_var = Vec::with_capacity(dim);
        for r in 0..dim {
            let mut e = vec![T::zero(); dim];
            e[r] = T::one();
            chol_solve(&chol, dim, &mut e);
            beta_var.push(T::of(100.0) * sigma2 * e[r]);
        }

        let covariates = schema
            .entries()
            .iter()
            .enumerate()
            .map(|(j, (_, kind))| match kind {
                CovariateKind::Continuous => {
                    let values: Vec<T> = (0..data.n()).map(|i| data.l_row(i)[j]).collect();
                    let m = crate::stats::mean(&values);
                    let v = crate::stats::variance(&values).max(T::of(1e-12));
                    CovariatePrior::Continuous {
                        mean0: m,
                        var0: T::of(100.0) * v,
                        var_prior: InvGammaPrior {
                            shape: T::of(10.0),
                            rate: T::of(9.0) * v,
                        },
                    }
                }
                CovariateKind::Binary => CovariatePrior::Binary {
                    a: T::one(),
                    b: T::one(),
                },
                CovariateKind::Categorical(levels) => CovariatePrior::Categorical {
                    concentration: vec![T::one(); *levels],
                },
            })
            .collect();

        Ok(Self {
            beta: GaussianVecPrior {
                mean: coef,
                var: beta_var,
            },
            phi: InvGammaPrior {
                shape: T::of(3.0),
                rate: T::of(2.0) * sigma2,
            },
            gamma: GaussianVecPrior::isotropic(dim, T::zero(), T::of(2.0)),
            eta: GaussianVecPrior::isotropic(p + 1, T::zero(), T::of(2.0)),
            covariates,
        })
    }

    pub fn validate(&self, schema: &CovariateSchema) -> Result<()> {
        let p = schema.encoded_len();
        if self.beta.mean.len() != p + 2 || self.beta.var.len() != p + 2 {
            return Err(Error::Config("beta prior dimension mismatch".into()));
        }
        if self.gamma.mean.len() != p + 2 || self.gamma.var.len() != p + 2 {
            return Err(Error::Config("gamma prior dimension mismatch".into()));
        }
        if self.eta.mean.len() != p + 1 || self.eta.var.len() != p + 1 {
            return Err(Error::Config("eta prior dimension mismatch".into()));
        }
        if self.covariates.len() != schema.n_raw() {
            return Err(Error::Config("covariate prior count mismatch".into()));
        }
        let pos = |v: T| v > T::zero() && v.is_finite();
        for &v in self.beta.var.iter().chain(&self.gamma.var).chain(&self.eta.var) {
            if !pos(v) {
                return Err(Error::Config("prior variances must be positive".into()));
            }
        }
        if !pos(self.phi.shape) || !pos(self.phi.rate) {
            return Err(Error::Config("phi prior parameters must be positive".into()));
        }
        for (cp, (name, kind)) in self.covariates.iter().zip(schema.entries()) {
            match (cp, kind) {
                (
                    CovariatePrior::Continuous {
                        var0, var_prior, ..
                    },
                    CovariateKind::Continuous,
                ) => {
                    if !pos(*var0) || !pos(var_prior.shape) || !pos(var_prior.rate) {
                        return Err(Error::Config(format!(
                            "covariate `{name}`: prior parameters must be positive"
                        )));
                    }
                }
                (CovariatePrior::Binary { a, b }, CovariateKind::Binary) => {
                    if !pos(*a) || !pos(*b) {
                        return Err(Error::Config(format!(
                            "covariate `{name}`: Beta parameters must be positive"
                        )));
                    }
                }
                (
                    CovariatePrior::Categorical { concentration },
                    CovariateKind::Categorical(levels),
                ) => {
                    if concentration.len() != *levels || concentration.iter().any(|&c| !pos(c)) {
                        return Err(Error::Config(format!(
                            "covariate `{name}`: Dirichlet concentration must be {levels} positive values"
                        )));
                    }
                }
                _ => {
                    return Err(Error::Config(format!(
                        "covariate `{name}`: prior kind does not match schema"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Draw a fresh cluster parameter set from `G0`.
    pub fn draw_cluster<R: Rng + ?Sized>(&self, rng: &mut R) -> ClusterParams<T> {
        ClusterParams {
            beta: self.beta.draw(rng),
            phi: self.phi.draw(rng),
            gamma: self.gamma.draw(rng),
            eta: self.eta.draw(rng),
            theta: self.covariates.iter().map(|c| c.draw(rng)).collect(),
        }
    }

    /// Draw a raw covariate row from the covariate models in `theta`.
    pub fn draw_covariate_row<R: Rng + ?Sized>(
        theta: &[CovariateParams<T>],
        rng: &mut R,
        out: &mut Vec<T>,
    ) {
        out.clear();
        for th in theta {
            match th {
                CovariateParams::Continuous { mean, var } => {
                    out.push(*mean + var.sqrt() * T::std_normal(rng));
                }
                CovariateParams::Binary { p } => {
                    out.push(if T::open01(rng) < *p { T::one() } else { T::zero() });
                }
                CovariateParams::Categorical { probs } => {
                    let u = T::open01(rng);
                    let mut acc = T::zero();
                    let mut level = probs.len() - 1;
                    for (k, &q) in probs.iter().enumerate() {
                        acc += q;
                        if u <= acc {
                            level = k;
                            break;
                        }
                    }
                    out.push(T::from_usize(level).unwrap());
                }
            }
        }
    }
}

/// Prior specification for the DP concentration parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConcentrationSpec<T> {
    /// Hold alpha fixed.
    Fixed { alpha: T },
    /// Gamma(shape, rate) prior, updated with a Metropolis step on
    /// log(alpha) using a Gaussian proposal with this standard deviation.
    GammaPrior { shape: T, rate: T, jump_sd: T },
    /// Inverse-gamma(shape, rate) prior, same Metropolis update.
    InvGammaPrior { shape: T, rate: T, jump_sd: T },
}

impl<T: Real> ConcentrationSpec<T> {
    /// The conventional Gamma(1, 1) prior with unit log-scale jumps.
    pub fn default_gamma() -> Self {
        ConcentrationSpec::GammaPrior {
            shape: T::one(),
            rate: T::one(),
            jump_sd: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        match self {
            ConcentrationSpec::Fixed { alpha } => {
                if !pos(*alpha) {
                    return Err(Error::Config("fixed alpha must be positive".into()));
                }
            }
            ConcentrationSpec::GammaPrior {
                shape,
                rate,
                jump_sd,
            }
            | ConcentrationSpec::InvGammaPrior {
                shape,
                rate,
                jump_sd,
            } => {
                if !pos(*shape) || !pos(*rate) || !pos(*jump_sd) {
                    return Err(Error::Config(
                        "concentration prior parameters must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Starting value: the fixed value or the prior mean (falling back to 1
    /// when the inverse-gamma mean does not exist).
    pub fn initial_alpha(&self) -> T {
        match self {
            ConcentrationSpec::Fixed { alpha } => *alpha,
            ConcentrationSpec::GammaPrior { shape, rate, .. } => *shape / *rate,
            ConcentrationSpec::InvGammaPrior { shape, rate, .. } => {
                if *shape > T::one() {
                    *rate / (*shape - T::one())
                } else {
                    T::one()
                }
            }
        }
    }

    /// Log prior density of alpha (up to a constant).
    pub fn log_prior(&self, alpha: T) -> T {
        match self {
            ConcentrationSpec::Fixed { .. } => T::zero(),
            ConcentrationSpec::GammaPrior { shape, rate, .. } => {
                (*shape - T::one()) * alpha.ln() - *rate * alpha
            }
            ConcentrationSpec::InvGammaPrior { shape, rate, .. } => {
                -(*shape + T::one()) * alpha.ln() - *rate / alpha
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::derive_rng;

    fn schema() -> CovariateSchema {
        CovariateSchema::new(vec![
            ("l1".into(), CovariateKind::Continuous),
            ("l2".into(), CovariateKind::Binary),
        ])
        .unwrap()
    }

    #[test]
    fn default_prior_validates_and_draws() {
        let s = schema();
        let prior = BasePrior::<f64>::default_for(&s);
        prior.validate(&s).unwrap();
        let mut rng = derive_rng(1, 0);
        for _ in 0..50 {
            let w = prior.draw_cluster(&mut rng);
            w.validate(&s).unwrap();
        }
    }

    #[test]
    fn empirical_prior_centers_on_ols() {
        let s = schema();
        let n = 200;
        let mut rng = derive_rng(2, 0);
        let mut y = Vec::new();
        let mut a = Vec::new();
        let mut l = Vec::new();
        for i in 0..n {
            let l1 = f64::std_normal(&mut rng);
            let l2 = f64::from(i % 2 == 0);
            let ai = u8::from(i % 3 == 0);
            let yi = 2.0 + 1.5 * f64::from(ai) + 0.5 * l1 - l2 + 0.3 * f64::std_normal(&mut rng);
            y.push(yi);
            a.push(ai);
            l.extend_from_slice(&[l1, l2]);
        }
        let data = Dataset::new(s.clone(), y, a, l).unwrap();
        let prior = BasePrior::empirical(&data).unwrap();
        prior.validate(&s).unwrap();
        assert!((prior.beta.mean[0] - 2.0).abs() < 0.2);
        assert!((prior.beta.mean[1] - 1.5).abs() < 0.2);
        assert!((prior.beta.mean[2] - 0.5).abs() < 0.2);
        assert!((prior.beta.mean[3] + 1.0).abs() < 0.2);
        // residual variance around 0.09
        let phi_mean = prior.phi.mean().unwrap();
        assert!(phi_mean > 0.05 && phi_mean < 0.15, "phi mean {phi_mean}");
    }

    #[test]
    fn empirical_prior_needs_nonzero_outcomes() {
        let s = schema();
        let data = Dataset::new(
            s,
            vec![0.0; 5],
            vec![0; 5],
            vec![0.0; 10],
        )
        .unwrap();
        assert!(BasePrior::empirical(&data).is_err());
    }

    #[test]
    fn concentration_spec_validation_and_initial_values() {
        assert!(ConcentrationSpec::Fixed { alpha: 0.0f64 }.validate().is_err());
        let g = ConcentrationSpec::<f64>::default_gamma();
        g.validate().unwrap();
        assert_eq!(g.initial_alpha(), 1.0);
        let ig = ConcentrationSpec::InvGammaPrior {
            shape: 1.0f64,
            rate: 1.0,
            jump_sd: 1.0,
        };
        assert_eq!(ig.initial_alpha(), 1.0);
    }

    #[test]
    fn dirichlet_draws_live_on_simplex() {
        let mut rng = derive_rng(3, 0);
        for _ in 0..20 {
            let d = draw_dirichlet(&[0.5f64, 1.0, 2.0], &mut rng);
            let total: f64 = d.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(d.iter().all(|&x| x > 0.0));
        }
    }
}
