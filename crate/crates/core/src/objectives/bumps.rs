use crate::error::Result;
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags};

/// A two-dimensional function on `[0,1]²` that is submodular but not
/// DR-submodular:
///
/// `0.7(x₁ − x₂)² + e^{−4(2x₁−5/3)²} + 0.6 e^{−4(2x₁−1/3)²}
///  + e^{−4(2x₂−5/3)²} + e^{−4(2x₂−1/3)²}`.
///
/// The only cross term is `−1.4 x₁x₂`, while the Gaussian bumps make each
/// coordinate non-concave.
#[derive(Clone, Debug)]
pub struct TwoBumps {
    domain: BoxDomain,
}

impl TwoBumps {
    pub fn new() -> Self {
        TwoBumps {
            domain: BoxDomain::unit(2),
        }
    }
}

impl Default for TwoBumps {
    fn default() -> Self {
        Self::new()
    }
}

/// `(e^{−4(2x−a)²}, d/dx)`.
fn bump(x: f64, a: f64) -> (f64, f64) {
    let r = 2.0 * x - a;
    let e = (-4.0 * r * r).exp();
    (e, -16.0 * r * e)
}

impl Objective for TwoBumps {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        ObjectiveFlags::new(false, false, true)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        let (x1, x2) = (x[0], x[1]);
        let diff = x1 - x2;
        let (a, da) = bump(x1, 5.0 / 3.0);
        let (b, db) = bump(x1, 1.0 / 3.0);
        let (c, dc) = bump(x2, 5.0 / 3.0);
        let (d, dd) = bump(x2, 1.0 / 3.0);
        let value = 0.7 * diff * diff + a + 0.6 * b + c + d;
        let grad = vec![1.4 * diff + da + 0.6 * db, -1.4 * diff + dc + dd];
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "two_bumps"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_peak_values() {
        let f = TwoBumps::new();
        let v = f.value(&[5.0 / 6.0, 5.0 / 6.0]).unwrap();
        let tail = (-4.0f64 * (4.0 / 3.0f64).powi(2)).exp();
        assert!((v - (1.0 + 0.6 * tail + 1.0 + tail)).abs() < 1e-12);
    }

    #[test]
    fn flagged_submodular_only() {
        let flags = TwoBumps::new().flags();
        assert!(flags.submodular && !flags.dr_submodular);
    }
}
