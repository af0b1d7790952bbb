//! The objective and set-function interfaces every solver and check consumes.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::BoxDomain;

/// Structural facts an objective declares about itself.
///
/// `dr_submodular` always implies `submodular`; [`ObjectiveFlags::new`]
/// enforces it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveFlags {
    pub monotone: bool,
    pub dr_submodular: bool,
    pub submodular: bool,
    /// Lipschitz constant `L` of the gradient, when known.
    pub lipschitz_estimate: Option<f64>,
    /// Strong DR-submodularity modulus `μ`, only when certified.
    pub strong_dr: Option<f64>,
}

impl ObjectiveFlags {
    pub fn new(monotone: bool, dr_submodular: bool, submodular: bool) -> Self {
        ObjectiveFlags {
            monotone,
            dr_submodular,
            submodular: submodular || dr_submodular,
            lipschitz_estimate: None,
            strong_dr: None,
        }
    }

    /// Monotone DR-submodular.
    pub fn monotone_dr() -> Self {
        Self::new(true, true, true)
    }

    pub fn with_lipschitz(mut self, l: Option<f64>) -> Self {
        self.lipschitz_estimate = l;
        self
    }

    pub fn with_strong_dr(mut self, mu: Option<f64>) -> Self {
        self.strong_dr = mu;
        self
    }

    /// No structure known.
    pub fn unknown() -> Self {
        Self::default()
    }
}

/// A differentiable function on a box `[0, ū]`.
///
/// Implementations are immutable after construction and must support
/// concurrent read-only evaluation.
pub trait Objective: Send + Sync {
    fn domain(&self) -> &BoxDomain;

    fn flags(&self) -> ObjectiveFlags;

    /// Value and gradient at `x`. Errors when `x` leaves the domain.
    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;

    /// Value only. Override when cheaper than the full gradient.
    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval_grad(x)?.0)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval_grad(x)?.1)
    }

    fn dim(&self) -> usize {
        self.domain().dim()
    }

    /// Short human-readable family name.
    fn name(&self) -> &str {
        "objective"
    }
}

/// A set function `F: 2^V → ℝ` given by a value oracle over membership masks.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn eval_set(&self, members: &[bool]) -> Result<f64>;
}

impl<T: Objective + ?Sized> Objective for std::sync::Arc<T> {
    fn domain(&self) -> &BoxDomain {
        (**self).domain()
    }
    fn flags(&self) -> ObjectiveFlags {
        (**self).flags()
    }
    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        (**self).eval_grad(x)
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
    fn name(&self) -> &str {
        (**self).name()
    }
}

impl<F: Fn(&[bool]) -> f64 + Send + Sync> SetFunction for (usize, F) {
    fn ground_size(&self) -> usize {
        self.0
    }

    fn eval_set(&self, members: &[bool]) -> Result<f64> {
        crate::error::check_dim(self.0, members.len())?;
        Ok((self.1)(members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dr_implies_submodular() {
        let f = ObjectiveFlags::new(false, true, false);
        assert!(f.submodular);
        assert!(!ObjectiveFlags::new(false, false, false).submodular);
    }

    #[test]
    fn closure_set_function() {
        let f = (3usize, |s: &[bool]| s.iter().filter(|&&b| b).count() as f64);
        assert_eq!(f.eval_set(&[true, false, true]).unwrap(), 2.0);
        assert!(f.eval_set(&[true]).is_err());
    }
}
