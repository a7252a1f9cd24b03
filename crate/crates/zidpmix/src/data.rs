//! Observed dataset: outcomes, treatments, covariates and derived zero
//! indicators, with cached regression design rows.

use crate::error::Error;
use crate::real::Real;
use crate::schema::{design_vectors, CovariateSchema};
use crate::Result;

/// Immutable dataset of `n` subjects.
///
/// The zero indicator is derived at construction: `z_i = 1` iff
/// `|y_i| <= zero_epsilon` (default epsilon zero, i.e. exact equality).
/// Design rows `x_i = (1, a_i, enc(l_i))` and `m_i = (1, enc(l_i))` are
/// cached because every sampler sweep evaluates them many times.
#[derive(Debug, Clone)]
pub struct Dataset<T> {
    schema: CovariateSchema,
    y: Vec<T>,
    a: Vec<u8>,
    l: Vec<T>,
    z: Vec<u8>,
    x_rows: Vec<T>,
    m_rows: Vec<T>,
}

impl<T: Real> Dataset<T> {
    /// Build a dataset with the default exact-equality zero rule.
    pub fn new(schema: CovariateSchema, y: Vec<T>, a: Vec<u8>, l: Vec<T>) -> Result<Self> {
        Self::with_zero_epsilon(schema, y, a, l, T::zero())
    }

    /// Build a dataset, treating `|y| <= zero_epsilon` as a structural zero.
    pub fn with_zero_epsilon(
        schema: CovariateSchema,
        y: Vec<T>,
        a: Vec<u8>,
        l: Vec<T>,
        zero_epsilon: T,
    ) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::Schema("dataset must have at least one subject".into()));
        }
        if a.len() != n {
            return Err(Error::Schema(format!(
                "treatment vector length {} does not match n = {n}",
                a.len()
            )));
        }
        let n_raw = schema.n_raw();
        if l.len() != n * n_raw {
            return Err(Error::Schema(format!(
                "covariate matrix has {} values, expected {n} x {n_raw}",
                l.len()
            )));
        }
        if zero_epsilon < T::zero() {
            return Err(Error::Schema("zero_epsilon must be nonnegative".into()));
        }
        for (i, &v) in y.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Schema(format!("outcome {i} is not finite")));
            }
        }
        for (i, &t) in a.iter().enumerate() {
            if t > 1 {
                return Err(Error::Schema(format!(
                    "treatment {i} must be 0 or 1, got {t}"
                )));
            }
        }
        let z: Vec<u8> = y
            .iter()
            .map(|&v| u8::from(v.abs() <= zero_epsilon))
            .collect();

        let p = schema.encoded_len();
        let mut x_rows = Vec::with_capacity(n * (p + 2));
        let mut m_rows = Vec::with_capacity(n * (p + 1));
        for i in 0..n {
            let row = &l[i * n_raw..(i + 1) * n_raw];
            let (x, m) = design_vectors(&schema, a[i], row)
                .map_err(|e| Error::Schema(format!("subject {i}: {e}")))?;
            x_rows.extend_from_slice(&x);
            m_rows.extend_from_slice(&m);
        }

        Ok(Self {
            schema,
            y,
            a,
            l,
            z,
            x_rows,
            m_rows,
        })
    }

    pub fn schema(&self) -> &CovariateSchema {
        &self.schema
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Expanded design dimension `p` (excluding intercept and treatment).
    pub fn p(&self) -> usize {
        self.schema.encoded_len()
    }

    pub fn y(&self, i: usize) -> T {
        self.y[i]
    }

    pub fn a(&self, i: usize) -> u8 {
        self.a[i]
    }

    pub fn z(&self, i: usize) -> u8 {
        self.z[i]
    }

    pub fn ys(&self) -> &[T] {
        &self.y
    }

    pub fn treatments(&self) -> &[u8] {
        &self.a
    }

    pub fn zeros(&self) -> &[u8] {
        &self.z
    }

    /// Raw (unencoded) covariate row of subject `i`.
    pub fn l_row(&self, i: usize) -> &[T] {
        let w = self.schema.n_raw();
        &self.l[i * w..(i + 1) * w]
    }

    /// Cached outcome/zero-model design row `(1, a_i, enc(l_i))`.
    pub fn x_row(&self, i: usize) -> &[T] {
        let w = self.p() + 2;
        &self.x_rows[i * w..(i + 1) * w]
    }

    /// Cached treatment-model design row `(1, enc(l_i))`.
    pub fn m_row(&self, i: usize) -> &[T] {
        let w = self.p() + 1;
        &self.m_rows[i * w..(i + 1) * w]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::CovariateKind;

    fn schema() -> CovariateSchema {
        CovariateSchema::new(vec![
            ("l1".into(), CovariateKind::Continuous),
            ("l2".into(), CovariateKind::Binary),
        ])
        .unwrap()
    }

    #[test]
    fn zero_indicator_exact_equality() {
        let d = Dataset::new(
            schema(),
            vec![0.0f64, 1.5, -2.0, 0.0],
            vec![0, 1, 0, 1],
            vec![0.1, 1.0, 0.2, 0.0, 0.3, 1.0, 0.4, 0.0],
        )
        .unwrap();
        assert_eq!(d.zeros(), &[1, 0, 0, 1]);
        assert_eq!(d.x_row(1), &[1.0, 1.0, 0.2, 0.0]);
        assert_eq!(d.m_row(2), &[1.0, 0.3, 1.0]);
    }

    #[test]
    fn zero_epsilon_tolerance() {
        let d = Dataset::with_zero_epsilon(
            schema(),
            vec![1e-9f64, 1.5],
            vec![0, 1],
            vec![0.0, 0.0, 0.0, 0.0],
            1e-8,
        )
        .unwrap();
        assert_eq!(d.zeros(), &[1, 0]);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(Dataset::<f64>::new(schema(), vec![], vec![], vec![]).is_err());
        assert!(Dataset::new(schema(), vec![1.0], vec![2], vec![0.0, 0.0]).is_err());
        assert!(Dataset::new(schema(), vec![1.0], vec![0], vec![0.0]).is_err());
        assert!(Dataset::new(schema(), vec![f64::NAN], vec![0], vec![0.0, 0.0]).is_err());
        // binary covariate must be 0/1
        assert!(Dataset::new(schema(), vec![1.0], vec![0], vec![0.0, 0.7]).is_err());
    }
}
