use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::linalg::{is_symmetric, min_symmetric_eigenvalue, Lu};
use crate::objective::{Objective, ObjectiveFlags};

const PSD_TOLERANCE: f64 = 1e-8;

/// Softmax extension of a DPP with kernel `L`:
/// `f(x) = ln det(diag(x)(L − I) + I)` on `[0, 1]ⁿ`.
///
/// `M = diag(x)(L − I) + I` is not symmetric, so the determinant goes through
/// LU with partial pivoting. With `C = M⁻¹` and `D = L − I`, the gradient is
/// `∇ᵢf = Σⱼ D_ij C_ji`.
#[derive(Clone, Debug)]
pub struct SoftmaxObjective {
    kernel: DMatrix<f64>,
    shifted: DMatrix<f64>,
    domain: BoxDomain,
}

impl SoftmaxObjective {
    pub fn new(kernel: DMatrix<f64>) -> Result<Self> {
        let n = kernel.nrows();
        if n == 0 {
            return Err(Error::InvalidParameter("kernel must be non-empty".into()));
        }
        check_dim(n, kernel.ncols())?;
        if kernel.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("kernel entries must be finite".into()));
        }
        if !is_symmetric(&kernel, 1e-10 * kernel.amax().max(1.0)) {
            return Err(Error::InvalidParameter("kernel must be symmetric".into()));
        }
        let min_eig = min_symmetric_eigenvalue(&kernel);
        if min_eig < -PSD_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "kernel must be positive semidefinite (smallest eigenvalue {min_eig:e})"
            )));
        }
        let shifted = &kernel - DMatrix::identity(n, n);
        Ok(SoftmaxObjective {
            kernel,
            shifted,
            domain: BoxDomain::unit(n),
        })
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    fn factor(&self, x: &[f64]) -> Result<Lu> {
        self.domain.check(x)?;
        let n = x.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            x[i] * self.shifted[(i, j)] + if i == j { 1.0 } else { 0.0 }
        });
        Lu::new(&m)
    }
}

impl Objective for SoftmaxObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        ObjectiveFlags::new(false, true, true)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.factor(x)?.log_det_positive()
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let lu = self.factor(x)?;
        let value = lu.log_det_positive()?;
        let inv = lu.inverse();
        let n = x.len();
        let grad = (0..n)
            .map(|i| (0..n).map(|j| self.shifted[(i, j)] * inv[(j, i)]).sum())
            .collect();
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "softmax"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig_kernel() -> SoftmaxObjective {
        SoftmaxObjective::new(DMatrix::from_row_slice(2, 2, &[2.25, 3.0, 3.0, 4.25])).unwrap()
    }

    #[test]
    fn two_by_two_values() {
        let f = fig_kernel();
        assert_eq!(f.value(&[0.0, 0.0]).unwrap(), 0.0);
        assert_relative_eq!(f.value(&[1.0, 1.0]).unwrap(), 0.5625f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(f.value(&[1.0, 0.0]).unwrap(), 2.25f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn gradient_at_zero_is_diagonal_minus_one() {
        // C = I at x = 0, so ∇ᵢf = L_ii − 1.
        let (_, g) = fig_kernel().eval_grad(&[0.0, 0.0]).unwrap();
        assert_relative_eq!(g[0], 1.25, epsilon = 1e-14);
        assert_relative_eq!(g[1], 3.25, epsilon = 1e-14);
    }

    #[test]
    fn rejects_indefinite_kernel() {
        let r = SoftmaxObjective::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]));
        assert!(r.is_err());
    }

    #[test]
    fn singular_at_rank_deficient_support() {
        let f = SoftmaxObjective::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert!(matches!(f.value(&[1.0, 1.0]), Err(Error::Singular)));
        assert!(f.value(&[0.5, 0.5]).is_ok());
    }
}
