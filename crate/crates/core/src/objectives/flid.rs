use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags, SetFunction};

/// Multilinear extension of the FLID set function
/// `F(S) = Σ_{i∈S} u'_i + Σ_d max_{i∈S} W_{i,d}`.
///
/// Each latent dimension keeps the permutation sorting its column
/// nondecreasingly (stable, ties by ascending item index). The closed form is
/// `Σ_i u'_i x_i + Σ_d Σ_l W_{i_d(l),d} x_{i_d(l)} Π_{m>l} (1 − x_{i_d(m)})`.
#[derive(Clone, Debug)]
pub struct FlidObjective {
    /// Row `i` holds item `i`'s `D` weights.
    weights: Vec<Vec<f64>>,
    utilities: Vec<f64>,
    orders: Vec<Vec<usize>>,
    domain: BoxDomain,
}

impl FlidObjective {
    pub fn new(weights: Vec<Vec<f64>>, utilities: Vec<f64>) -> Result<Self> {
        let orders = Self::sorted_orders(&weights)?;
        Self::with_orders(weights, utilities, orders)
    }

    /// Facility location: all modular utilities zero.
    pub fn facility_location(weights: Vec<Vec<f64>>) -> Result<Self> {
        let n = weights.len();
        Self::new(weights, vec![0.0; n])
    }

    /// Builds from externally supplied per-dimension orders, which must sort
    /// every column nondecreasingly.
    pub fn with_orders(
        weights: Vec<Vec<f64>>,
        utilities: Vec<f64>,
        orders: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidParameter("FLID needs at least one item".into()));
        }
        check_dim(n, utilities.len())?;
        let dims = weights[0].len();
        for row in &weights {
            check_dim(dims, row.len())?;
            if row.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
                return Err(Error::InvalidParameter("FLID weights must be finite and >= 0".into()));
            }
        }
        if utilities.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidParameter("FLID utilities must be finite".into()));
        }
        check_dim(dims, orders.len())?;
        let f = FlidObjective {
            weights,
            utilities,
            orders,
            domain: BoxDomain::unit(n),
        };
        f.check_orders()?;
        Ok(f)
    }

    fn sorted_orders(weights: &[Vec<f64>]) -> Result<Vec<Vec<usize>>> {
        let dims = weights.first().map_or(0, Vec::len);
        (0..dims)
            .map(|d| {
                let mut order: Vec<usize> = (0..weights.len()).collect();
                for row in weights {
                    if row.len() != dims {
                        return Err(Error::DimensionMismatch { expected: dims, found: row.len() });
                    }
                }
                // `sort_by` is stable, so equal weights keep ascending index.
                order.sort_by(|&a, &b| weights[a][d].total_cmp(&weights[b][d]));
                Ok(order)
            })
            .collect()
    }

    fn check_orders(&self) -> Result<()> {
        let n = self.weights.len();
        for (d, order) in self.orders.iter().enumerate() {
            let mut seen = vec![false; n];
            if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::Internal(format!("order for dimension {d} is not a permutation")));
            }
            if order
                .windows(2)
                .any(|w| self.weights[w[0]][d] > self.weights[w[1]][d])
            {
                return Err(Error::Internal(format!(
                    "stale sort order for dimension {d}: weights not nondecreasing"
                )));
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    pub fn latent_dims(&self) -> usize {
        self.orders.len()
    }
}

impl Objective for FlidObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        let monotone = self.utilities.iter().all(|&u| u >= 0.0);
        ObjectiveFlags::new(monotone, true, true)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain.check(x)?;
        self.check_orders()?;
        let mut value: f64 = self.utilities.iter().zip(x).map(|(u, v)| u * v).sum();
        for (d, order) in self.orders.iter().enumerate() {
            let mut suffix = 1.0;
            for &i in order.iter().rev() {
                value += self.weights[i][d] * x[i] * suffix;
                suffix *= 1.0 - x[i];
            }
        }
        Ok(value)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        self.check_orders()?;
        let n = x.len();
        let mut value: f64 = self.utilities.iter().zip(x).map(|(u, v)| u * v).sum();
        let mut grad = self.utilities.clone();
        let mut suffix = vec![0.0; n];
        for (d, order) in self.orders.iter().enumerate() {
            // suffix[p] = Π_{m>p} (1 − x_{order[m]})
            let mut acc = 1.0;
            for p in (0..n).rev() {
                suffix[p] = acc;
                let i = order[p];
                value += self.weights[i][d] * x[i] * acc;
                acc *= 1.0 - x[i];
            }
            // F(x; x_i = 1) − F(x; x_i = 0) = suffix[p] · (w_p − A_p), with
            // A_p = Σ_{l<p} w_l x_l Π_{l<m<p} (1 − x_m).
            let mut below = 0.0;
            for (p, &i) in order.iter().enumerate() {
                let w = self.weights[i][d];
                grad[i] += suffix[p] * (w - below);
                below = below * (1.0 - x[i]) + w * x[i];
            }
        }
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "flid"
    }
}

impl SetFunction for FlidObjective {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn eval_set(&self, members: &[bool]) -> Result<f64> {
        check_dim(self.ground_size(), members.len())?;
        let mut value = 0.0;
        for (i, _) in members.iter().enumerate().filter(|(_, &m)| m) {
            value += self.utilities[i];
        }
        for d in 0..self.latent_dims() {
            let best = members
                .iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| self.weights[i][d])
                .fold(None, |acc: Option<f64>, w| Some(acc.map_or(w, |a| a.max(w))));
            value += best.unwrap_or(0.0);
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item() {
        let f = FlidObjective::new(vec![vec![0.5, 2.0]], vec![-1.0]).unwrap();
        let x = 0.3;
        assert!((f.value(&[x]).unwrap() - (-x + x * 2.5)).abs() < 1e-15);
    }

    #[test]
    fn gradient_at_zero() {
        let w = vec![vec![1.0, 0.2], vec![3.0, 0.1], vec![2.0, 0.4]];
        let f = FlidObjective::new(w.clone(), vec![0.1, -0.5, 0.0]).unwrap();
        let (v, g) = f.eval_grad(&[0.0; 3]).unwrap();
        assert_eq!(v, 0.0);
        for i in 0..3 {
            let expect = f.utilities()[i] + w[i].iter().sum::<f64>();
            assert!((g[i] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn ties_break_by_index() {
        let f = FlidObjective::facility_location(vec![vec![1.0], vec![1.0], vec![0.5]]).unwrap();
        assert_eq!(f.orders[0], vec![2, 0, 1]);
    }

    #[test]
    fn stale_order_is_an_internal_error() {
        let w = vec![vec![1.0], vec![2.0]];
        let r = FlidObjective::with_orders(w, vec![0.0, 0.0], vec![vec![1, 0]]);
        assert!(matches!(r, Err(Error::Internal(_))));
    }

    #[test]
    fn rejects_negative_weights() {
        assert!(FlidObjective::facility_location(vec![vec![-1.0]]).is_err());
    }
}
