//! Covariate schema and regression design vectors.

use crate::error::Error;
use crate::real::Real;
use crate::Result;

/// Kind of one covariate column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovariateKind {
    Continuous,
    Binary,
    /// Categorical with this many levels (>= 2), stored as level indices
    /// `0..levels` and one-hot encoded against reference level 0.
    Categorical(usize),
}

impl CovariateKind {
    /// Number of design-matrix columns this covariate expands to.
    pub fn encoded_len(self) -> usize {
        match self {
            CovariateKind::Continuous | CovariateKind::Binary => 1,
            CovariateKind::Categorical(levels) => levels - 1,
        }
    }
}

/// Ordered covariate declaration. The order is fixed and defines column
/// order in every matrix and parameter vector downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovariateSchema {
    entries: Vec<(String, CovariateKind)>,
    encoded_len: usize,
}

impl CovariateSchema {
    pub fn new(entries: Vec<(String, CovariateKind)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Schema("schema needs at least one covariate".into()));
        }
        for (i, (name, kind)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::Schema(format!("duplicate covariate name `{name}`")));
            }
            if let CovariateKind::Categorical(levels) = kind {
                if *levels < 2 {
                    return Err(Error::Schema(format!(
                        "categorical covariate `{name}` needs at least 2 levels, got {levels}"
                    )));
                }
            }
        }
        let encoded_len = entries.iter().map(|(_, k)| k.encoded_len()).sum();
        Ok(Self {
            entries,
            encoded_len,
        })
    }

    pub fn entries(&self) -> &[(String, CovariateKind)] {
        &self.entries
    }

    /// Number of covariates as stored (one column per covariate).
    pub fn n_raw(&self) -> usize {
        self.entries.len()
    }

    /// Number of expanded design columns `p` (categoricals one-hot encoded).
    pub fn encoded_len(&self) -> usize {
        self.encoded_len
    }

    /// Validate a raw covariate row against the schema.
    pub fn validate_row<T: Real>(&self, row: &[T]) -> Result<()> {
        if row.len() != self.entries.len() {
            return Err(Error::Schema(format!(
                "covariate row has {} values, schema declares {}",
                row.len(),
                self.entries.len()
            )));
        }
        for ((name, kind), &v) in self.entries.iter().zip(row) {
            if !v.is_finite() {
                return Err(Error::Schema(format!("covariate `{name}` is not finite")));
            }
            match kind {
                CovariateKind::Continuous => {}
                CovariateKind::Binary => {
                    if v != T::zero() && v != T::one() {
                        return Err(Error::Schema(format!(
                            "binary covariate `{name}` must be 0 or 1, got {v}"
                        )));
                    }
                }
                CovariateKind::Categorical(levels) => {
                    let as_f = v.as_f64();
                    if as_f.fract() != 0.0 || as_f < 0.0 || as_f >= *levels as f64 {
                        return Err(Error::Schema(format!(
                            "categorical covariate `{name}` must be an integer level in 0..{levels}, got {v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// One-hot encode a validated raw row, appending `encoded_len` values.
    pub fn encode_into<T: Real>(&self, row: &[T], out: &mut Vec<T>) {
        for ((_, kind), &v) in self.entries.iter().zip(row) {
            match kind {
                CovariateKind::Continuous | CovariateKind::Binary => out.push(v),
                CovariateKind::Categorical(levels) => {
                    let level = v.as_f64() as usize;
                    for l in 1..*levels {
                        out.push(if l == level { T::one() } else { T::zero() });
                    }
                }
            }
        }
    }
}

/// Build the regression design vectors for one subject:
/// `x = (1, a, encoded covariates)` for the outcome and zero models and
/// `m = (1, encoded covariates)` for the treatment model.
pub fn design_vectors<T: Real>(
    schema: &CovariateSchema,
    a: u8,
    l_row: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    schema.validate_row(l_row)?;
    let p = schema.encoded_len();
    let mut x = Vec::with_capacity(p + 2);
    x.push(T::one());
    x.push(if a == 0 { T::zero() } else { T::one() });
    schema.encode_into(l_row, &mut x);
    let mut m = Vec::with_capacity(p + 1);
    m.push(T::one());
    m.extend_from_slice(&x[2..]);
    Ok((x, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_continuous() -> CovariateSchema {
        CovariateSchema::new(vec![("l1".into(), CovariateKind::Continuous)]).unwrap()
    }

    #[test]
    fn design_vectors_definition() {
        let (x, m) = design_vectors(&one_continuous(), 1, &[0.5f64]).unwrap();
        assert_eq!(x, vec![1.0, 1.0, 0.5]);
        assert_eq!(m, vec![1.0, 0.5]);
    }

    #[test]
    fn design_vectors_zero_case() {
        let schema = CovariateSchema::new(vec![
            ("l1".into(), CovariateKind::Continuous),
            ("l2".into(), CovariateKind::Binary),
        ])
        .unwrap();
        let (x, m) = design_vectors(&schema, 0, &[0.0f64, 0.0]).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn categorical_one_hot_reference_level() {
        let schema = CovariateSchema::new(vec![
            ("grade".into(), CovariateKind::Categorical(3)),
        ])
        .unwrap();
        // level 2 of a 3-level categorical -> indicator block (0, 1)
        let (x, m) = design_vectors(&schema, 0, &[2.0f64]).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(m, vec![1.0, 0.0, 1.0]);
        // reference level 0 -> all-zero block
        let (x0, _) = design_vectors(&schema, 0, &[0.0f64]).unwrap();
        assert_eq!(x0, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn schema_rejects_bad_rows() {
        let schema = CovariateSchema::new(vec![
            ("b".into(), CovariateKind::Binary),
            ("c".into(), CovariateKind::Categorical(3)),
        ])
        .unwrap();
        assert!(schema.validate_row(&[0.5f64, 0.0]).is_err());
        assert!(schema.validate_row(&[1.0f64, 3.0]).is_err());
        assert!(schema.validate_row(&[1.0f64]).is_err());
        assert!(schema.validate_row(&[1.0f64, 1.0]).is_ok());
    }

    #[test]
    fn schema_invariants() {
        assert!(CovariateSchema::new(vec![]).is_err());
        assert!(CovariateSchema::new(vec![
            ("x".into(), CovariateKind::Continuous),
            ("x".into(), CovariateKind::Binary),
        ])
        .is_err());
        assert!(
            CovariateSchema::new(vec![("c".into(), CovariateKind::Categorical(1))]).is_err()
        );
        let s = CovariateSchema::new(vec![
            ("a".into(), CovariateKind::Continuous),
            ("c".into(), CovariateKind::Categorical(4)),
        ])
        .unwrap();
        assert_eq!(s.encoded_len(), 4);
    }
}
