use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::linalg::{is_symmetric, spectral_norm_power};
use crate::objective::{Objective, ObjectiveFlags};

const POWER_ITERATIONS: usize = 50;

/// `f(x) = ½ xᵀHx + hᵀx + c` on a box.
///
/// Submodular exactly when every off-diagonal entry of `H` is nonpositive,
/// DR-submodular when every entry is. Monotone when the gradient `Hx + h` is
/// nonnegative at every corner-minimizing point of the box, which for a
/// linear gradient is checked exactly per coordinate.
#[derive(Clone, Debug)]
pub struct QuadraticObjective {
    hessian: DMatrix<f64>,
    linear: Vec<f64>,
    constant: f64,
    domain: BoxDomain,
    flags: ObjectiveFlags,
}

impl QuadraticObjective {
    pub fn new(
        hessian: DMatrix<f64>,
        linear: Vec<f64>,
        constant: f64,
        domain: BoxDomain,
    ) -> Result<Self> {
        let n = domain.dim();
        check_dim(n, hessian.nrows())?;
        check_dim(n, hessian.ncols())?;
        check_dim(n, linear.len())?;
        if hessian.iter().chain(&linear).any(|v| !v.is_finite()) || !constant.is_finite() {
            return Err(Error::InvalidParameter("quadratic coefficients must be finite".into()));
        }
        let scale = hessian.amax().max(1.0);
        if !is_symmetric(&hessian, 1e-12 * scale) {
            return Err(Error::InvalidParameter("H must be symmetric".into()));
        }
        let off_diag_nonpositive =
            (0..n).all(|i| (0..n).all(|j| i == j || hessian[(i, j)] <= 0.0));
        let all_nonpositive = hessian.iter().all(|&v| v <= 0.0);
        let upper = domain.upper();
        let monotone = (0..n).all(|i| {
            let min_grad: f64 = linear[i]
                + (0..n)
                    .map(|j| (hessian[(i, j)] * upper[j]).min(0.0))
                    .sum::<f64>();
            min_grad >= 0.0
        });
        let lipschitz = spectral_norm_power(&hessian, POWER_ITERATIONS);
        // For v ≥ 0 (or v ≤ 0) and H ≤ 0 entrywise, vᵀHv ≤ max_i H_ii ‖v‖².
        let strong_dr = if all_nonpositive {
            let max_diag = (0..n).map(|i| hessian[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
            (max_diag < 0.0).then_some(-max_diag)
        } else {
            None
        };
        let flags = ObjectiveFlags::new(monotone, all_nonpositive, off_diag_nonpositive)
            .with_lipschitz(Some(lipschitz))
            .with_strong_dr(strong_dr);
        Ok(QuadraticObjective {
            hessian,
            linear,
            constant,
            domain,
            flags,
        })
    }

    /// Linear objective `⟨g, x⟩`.
    pub fn linear(g: Vec<f64>, domain: BoxDomain) -> Result<Self> {
        let n = g.len();
        Self::new(DMatrix::zeros(n, n), g, 0.0, domain)
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hessian
    }

    pub fn linear_term(&self) -> &[f64] {
        &self.linear
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }
}

impl Objective for QuadraticObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        self.flags
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        let n = x.len();
        let mut grad = self.linear.clone();
        let mut quad = 0.0;
        for i in 0..n {
            let mut hx = 0.0;
            for j in 0..n {
                hx += self.hessian[(i, j)] * x[j];
            }
            grad[i] += hx;
            quad += x[i] * hx;
        }
        let lin: f64 = self.linear.iter().zip(x).map(|(a, b)| a * b).sum();
        Ok((0.5 * quad + lin + self.constant, grad))
    }

    fn name(&self) -> &str {
        "quadratic"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> QuadraticObjective {
        QuadraticObjective::new(
            DMatrix::from_row_slice(2, 2, &[-1.0, -2.0, -2.0, -1.0]),
            vec![0.0, 0.0],
            0.0,
            BoxDomain::unit(2),
        )
        .unwrap()
    }

    #[test]
    fn intro_instance_values() {
        let q = intro();
        let (v, g) = q.eval_grad(&[1.0, 1.0]).unwrap();
        assert_eq!(v, -3.0);
        assert_eq!(g, vec![-3.0, -3.0]);
        let (v, g) = q.eval_grad(&[1.0, 0.0]).unwrap();
        assert_eq!(v, -0.5);
        assert_eq!(g, vec![-1.0, -2.0]);
        let f = q.flags();
        assert!(f.dr_submodular && f.submodular && !f.monotone);
        assert!((f.lipschitz_estimate.unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(f.strong_dr, Some(1.0));
    }

    #[test]
    fn zero_point_gives_constant_and_linear_term() {
        let q = QuadraticObjective::new(
            DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 1.0, -3.0]),
            vec![0.25, -1.5],
            4.0,
            BoxDomain::unit(2),
        )
        .unwrap();
        let (v, g) = q.eval_grad(&[0.0, 0.0]).unwrap();
        assert_eq!(v, 4.0);
        assert_eq!(g, vec![0.25, -1.5]);
        assert!(!q.flags().submodular);
    }

    #[test]
    fn rejects_asymmetric_and_outside_points() {
        let r = QuadraticObjective::new(
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            vec![0.0; 2],
            0.0,
            BoxDomain::unit(2),
        );
        assert!(r.is_err());
        assert!(matches!(intro().eval_grad(&[1.5, 0.0]), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn monotone_flag_from_gradient_at_worst_corner() {
        let h = DMatrix::from_row_slice(2, 2, &[-1.0, -0.5, -0.5, -1.0]);
        let q = QuadraticObjective::new(h.clone(), vec![1.5, 1.5], 0.0, BoxDomain::unit(2)).unwrap();
        assert!(q.flags().monotone);
        let q = QuadraticObjective::new(h, vec![1.4, 1.5], 0.0, BoxDomain::unit(2)).unwrap();
        assert!(!q.flags().monotone);
    }
}
