use super::{check_lmo_inputs, effective_upper, simplex, Region};
use crate::error::{check_dim, Error, Result};

/// `{x ≥ 0, A x ≤ b}` with `A > 0` entrywise and `b ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DownClosedPolytope {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    cap: Vec<f64>,
}

impl DownClosedPolytope {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("polytope needs at least one row".into()));
        }
        check_dim(a.len(), b.len())?;
        let n = a[0].len();
        if n == 0 {
            return Err(Error::InvalidParameter("polytope needs at least one column".into()));
        }
        for (i, row) in a.iter().enumerate() {
            check_dim(n, row.len())?;
            if row.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("row {i} of A must be strictly positive")));
            }
        }
        if b.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter("b must be finite and >= 0".into()));
        }
        let cap = derive_upper_bound(&a, &b);
        Ok(DownClosedPolytope { a, b, cap })
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// `cap_j = min_i b_i / A_ij`, the tightest box containing the polytope.
pub fn derive_upper_bound(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = a.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| {
            a.iter()
                .zip(b)
                .map(|(row, &bi)| bi / row[j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

impl Region for DownClosedPolytope {
    fn upper(&self) -> &[f64] {
        &self.cap
    }

    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>> {
        check_lmo_inputs(self.dim(), g, cap)?;
        let top = effective_upper(&self.cap, cap);
        let c: Vec<f64> = g.iter().map(|&v| v.max(0.0)).collect();
        let bounds: Vec<f64> = top
            .iter()
            .zip(g)
            .map(|(&u, &gi)| if gi > 0.0 { u } else { 0.0 })
            .collect();
        simplex::maximize(&c, &self.a, &self.b, &bounds)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter().all(|&v| v >= -tol)
            && self
                .a
                .iter()
                .zip(&self.b)
                .all(|(row, &bi)| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() <= bi + tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_bound_examples() {
        assert_eq!(derive_upper_bound(&[vec![1.0, 1.0]], &[2.0]), vec![2.0, 2.0]);
        assert_eq!(
            derive_upper_bound(&[vec![1.0, 2.0], vec![2.0, 1.0]], &[2.0, 2.0]),
            vec![1.0, 1.0]
        );
    }

    #[test]
    fn identity_rows_recover_box() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let cap = derive_upper_bound(&a, &[3.0, 4.0]);
        assert_eq!(cap, vec![3.0, 4.0]);
    }

    #[test]
    fn boundary_membership() {
        let p = DownClosedPolytope::new(vec![vec![1.0, 1.0]], vec![1.0]).unwrap();
        assert!(p.contains(&[0.5, 0.5], 1e-9));
        assert!(!p.contains(&[0.6, 0.5], 1e-9));
    }

    #[test]
    fn lmo_on_two_rows() {
        let p = DownClosedPolytope::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![2.0, 2.0]).unwrap();
        let v = p.lmo(&[1.0, 1.0], None).unwrap();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-12 && (v[1] - 2.0 / 3.0).abs() < 1e-12);
        let v = p.lmo(&[1.0, -1.0], None).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
        let v = p.lmo(&[1.0, 1.0], Some(&[0.25, 0.25])).unwrap();
        assert_eq!(v, vec![0.25, 0.25]);
    }

    #[test]
    fn projection_unsupported() {
        let p = DownClosedPolytope::new(vec![vec![1.0]], vec![1.0]).unwrap();
        assert!(matches!(p.project(&[0.5]), Err(Error::Unsupported(_))));
    }
}
