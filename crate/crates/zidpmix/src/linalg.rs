//! Minimal dense symmetric-positive-definite helpers for the conjugate
//! regression updates. Matrices are row-major `Vec<T>` of size `dim * dim`;
//! the coefficient blocks here are tiny (p + 2), so no BLAS is warranted.

use crate::error::Error;
use crate::real::Real;
use crate::Result;

/// In-place lower Cholesky factorization, `a = L * L^T`. The upper triangle
/// is left untouched. Fails if the matrix is not positive definite.
pub(crate) fn cholesky<T: Real>(a: &mut [T], dim: usize) -> Result<()> {
    debug_assert_eq!(a.len(), dim * dim);
    for j in 0..dim {
        let mut d = a[j * dim + j];
        for k in 0..j {
            let l = a[j * dim + k];
            d -= l * l;
        }
        if !(d > T::zero() && d.is_finite()) {
            return Err(Error::Config(
                "matrix not positive definite in Cholesky factorization".into(),
            ));
        }
        let djj = d.sqrt();
        a[j * dim + j] = djj;
        for i in (j + 1)..dim {
            let mut s = a[i * dim + j];
            for k in 0..j {
                s -= a[i * dim + k] * a[j * dim + k];
            }
            a[i * dim + j] = s / djj;
        }
    }
    Ok(())
}

/// Solve `L * L^T x = b` in place given the lower factor.
pub(crate) fn chol_solve<T: Real>(l: &[T], dim: usize, b: &mut [T]) {
    // forward: L y = b
    for i in 0..dim {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * dim + k] * b[k];
        }
        b[i] = s / l[i * dim + i];
    }
    // backward: L^T x = y
    for i in (0..dim).rev() {
        let mut s = b[i];
        for k in (i + 1)..dim {
            s -= l[k * dim + i] * b[k];
        }
        b[i] = s / l[i * dim + i];
    }
}

/// Solve `L^T x = b` in place. If `b ~ N(0, I)` the result has covariance
/// `(L L^T)^{-1}`, which is how draws from a Gaussian with known precision
/// matrix are produced.
pub(crate) fn chol_lt_solve<T: Real>(l: &[T], dim: usize, b: &mut [T]) {
    for i in (0..dim).rev() {
        let mut s = b[i];
        for k in (i + 1)..dim {
            s -= l[k * dim + i] * b[k];
        }
        b[i] = s / l[i * dim + i];
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut s = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_known_system() {
        // A = [[4, 2], [2, 3]], b = (2, 5) -> x = A^{-1} b = (-0.5, 2)
        let mut a = vec![4.0f64, 2.0, 2.0, 3.0];
        cholesky(&mut a, 2).unwrap();
        let mut b = vec![2.0, 5.0];
        chol_solve(&a, 2, &mut b);
        assert!((b[0] + 0.5).abs() < 1e-12);
        assert!((b[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = vec![1.0f64, 2.0, 2.0, 1.0];
        assert!(cholesky(&mut a, 2).is_err());
    }

    #[test]
    fn lt_solve_matches_full_solve_composition() {
        let mut a = vec![2.0f64, 0.3, 0.3, 1.0];
        cholesky(&mut a, 2).unwrap();
        // L^T x = e1, then L y = x should equal full solve of A y = e1
        let mut x = vec![1.0, 0.0];
        let mut full = vec![1.0, 0.0];
        chol_solve(&a, 2, &mut full);
        // forward then backward by hand
        for i in 0..2 {
            let mut s = x[i];
            for k in 0..i {
                s -= a[i * 2 + k] * x[k];
            }
            x[i] = s / a[i * 2 + i];
        }
        chol_lt_solve(&a, 2, &mut x);
        assert!((x[0] - full[0]).abs() < 1e-12);
        assert!((x[1] - full[1]).abs() < 1e-12);
    }
}
