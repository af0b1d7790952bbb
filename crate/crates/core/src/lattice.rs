//! Dense points of ℝⁿ with the coordinate-wise lattice operations, and the
//! axis-aligned domains `[0, ū]` hosting every iterate.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Absolute tolerance used for equality and membership comparisons.
pub const TOL: f64 = 1e-9;

/// A finite point of ℝⁿ with `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("point must have dimension >= 1".into()));
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(entries))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "point must have dimension >= 1");
        Point(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        assert!(n >= 1 && value.is_finite());
        Point(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy of `self` with coordinate `i` set to `value`.
    pub fn with_coord(&self, i: usize, value: f64) -> Point {
        let mut out = self.0.clone();
        out[i] = value;
        Point(out)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Coordinate-wise maximum `x ∨ y`.
pub fn join(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dim(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(a, b)| a.max(*b)).collect())
}

/// Coordinate-wise minimum `x ∧ y`.
pub fn meet(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dim(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(a, b)| a.min(*b)).collect())
}

/// `a ≤ b` coordinate-wise.
pub fn leq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `x + step · d`.
pub fn axpy(x: &[f64], step: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + step * b).collect()
}

/// The domain `[0, ū]` with strictly positive upper corner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    upper: Point,
}

impl BoxDomain {
    pub fn new(upper: Vec<f64>) -> Result<Self> {
        let upper = Point::new(upper)?;
        if let Some(i) = upper.iter().position(|&u| u <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "upper bound {i} must be strictly positive, got {}",
                upper[i]
            )));
        }
        Ok(BoxDomain { upper })
    }

    pub fn unit(n: usize) -> Self {
        BoxDomain {
            upper: Point::filled(n, 1.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.upper.dim()
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.upper.iter())
                .all(|(&v, &u)| v >= -tol && v <= u + tol)
    }

    /// Checks `x` against the domain at [`TOL`], reporting the first offending
    /// coordinate.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        for (index, (&value, &upper)) in x.iter().zip(self.upper.iter()).enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < -TOL || value > upper + TOL {
                return Err(Error::OutsideDomain { index, value, upper });
            }
        }
        Ok(())
    }

    /// Clip `x` into the domain.
    pub fn clip(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.upper.iter())
            .map(|(&v, &u)| v.clamp(0.0, u))
            .collect()
    }

    /// `‖ū‖`, an upper bound on the diameter of any region inside the box.
    pub fn diameter_bound(&self) -> f64 {
        norm(&self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn join_and_meet_examples() {
        assert_eq!(join(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(meet(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(join(&[0.2, 0.7], &[0.5, 0.1]).unwrap(), vec![0.5, 0.7]);
        assert_eq!(meet(&[0.2, 0.7], &[0.5, 0.1]).unwrap(), vec![0.2, 0.1]);
        let x = [0.3, 0.9, 0.0];
        assert_eq!(join(&x, &x).unwrap(), x.to_vec());
        assert_eq!(meet(&x, &x).unwrap(), x.to_vec());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            join(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
        assert!(meet(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn point_rejects_nan_and_empty() {
        assert!(matches!(
            Point::new(vec![0.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(Point::new(vec![]).is_err());
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }

    #[test]
    fn box_requires_positive_upper() {
        assert!(BoxDomain::new(vec![1.0, 0.0]).is_err());
        let b = BoxDomain::new(vec![2.0, 3.0]).unwrap();
        assert!(b.contains(&[2.0, 0.0], 0.0));
        assert!(!b.contains(&[2.1, 0.0], 1e-9));
        assert!(matches!(
            b.check(&[0.0, 3.5]),
            Err(Error::OutsideDomain { index: 1, .. })
        ));
    }

    fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec(0.0..5.0f64, n),
                prop::collection::vec(0.0..5.0f64, n),
            )
        })
    }

    proptest! {
        #[test]
        fn modularity_identity((x, y) in pair()) {
            let j = join(&x, &y).unwrap();
            let m = meet(&x, &y).unwrap();
            for i in 0..x.len() {
                prop_assert!((j[i] + m[i] - x[i] - y[i]).abs() <= TOL);
            }
        }

        #[test]
        fn lattice_ops_stay_in_box((x, y) in pair()) {
            let b = BoxDomain::new(vec![5.0; x.len()]).unwrap();
            prop_assert!(b.contains(&join(&x, &y).unwrap(), 0.0));
            prop_assert!(b.contains(&meet(&x, &y).unwrap(), 0.0));
        }
    }
}
