//! Small dense linear-algebra helpers: LU with partial pivoting, power
//! iteration, and symmetric eigenvalue bounds.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `ln(1e-300)`: determinants below this magnitude are treated as singular.
const LOG_SINGULAR: f64 = -690.775_527_898_213_7;

/// LU factorization `PA = LU` of a square matrix, stored row-major.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factorizes `a` with partial pivoting. Fails only on an exactly zero
    /// pivot column.
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.ncols(),
            });
        }
        let mut lu = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                lu[i * n + j] = a[(i, j)];
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, max) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            if max == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm, sign })
    }

    /// `(sign, ln|det|)`.
    pub fn log_det(&self) -> (f64, f64) {
        let mut sign = self.sign;
        let mut log = 0.0;
        for k in 0..self.n {
            let d = self.lu[k * self.n + k];
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
        (sign, log)
    }

    /// `ln det` for a matrix whose determinant must be positive; a
    /// nonpositive or vanishing determinant is reported as singular.
    pub fn log_det_positive(&self) -> Result<f64> {
        let (sign, log) = self.log_det();
        if sign <= 0.0 || !(log > LOG_SINGULAR) {
            return Err(Error::Singular);
        }
        Ok(log)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in (i + 1)..n {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        y
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut inv = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Spectral-norm estimate of a symmetric matrix by power iteration.
pub fn spectral_norm_power(a: &DMatrix<f64>, iterations: usize) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    // Deterministic start with unequal weights so it is unlikely to be
    // orthogonal to the dominant eigenvector.
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0).sqrt() * 1e-3);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let w = a * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return estimate;
        }
        estimate = nw;
        v = w / nw;
    }
    estimate
}

pub fn min_symmetric_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    a.is_square()
        && (0..a.nrows()).all(|i| (0..i).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol))
}

/// Row-major nested vectors to a matrix.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
}

pub fn to_rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lu_det_and_inverse() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let lu = Lu::new(&a).unwrap();
        let (sign, log) = lu.log_det();
        // det = 0*(1) - 2*(1-0) + 1*(0-3) = -5
        assert_eq!(sign, -1.0);
        assert_relative_eq!(log, 5f64.ln(), epsilon = 1e-14);
        assert!(matches!(lu.log_det_positive(), Err(Error::Singular)));
        let inv = lu.inverse();
        let id = &a * inv;
        assert_relative_eq!(id, DMatrix::identity(3, 3), epsilon = 1e-12);
    }

    #[test]
    fn singular_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let r = Lu::new(&a).and_then(|lu| lu.log_det_positive());
        assert!(matches!(r, Err(Error::Singular)));
    }

    #[test]
    fn power_iteration_matches_eigen() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, -2.0, -2.0, -1.0]);
        assert_relative_eq!(spectral_norm_power(&a, 50), 3.0, epsilon = 1e-9);
        assert_relative_eq!(min_symmetric_eigenvalue(&a), -3.0, epsilon = 1e-12);
    }
}
