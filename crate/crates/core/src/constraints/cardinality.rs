use super::{check_lmo_inputs, effective_upper, Region};
use crate::error::{check_dim, Error, Result};
use crate::lattice::Point;

/// `{0 ≤ x ≤ u, Σ x_i ≤ b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalityPolytope {
    upper: Point,
    budget: f64,
}

impl CardinalityPolytope {
    /// A budget above `Σ u_i` is clamped to it.
    pub fn new(upper: Vec<f64>, budget: f64) -> Result<Self> {
        let upper = Point::new(upper)?;
        if upper.iter().any(|&u| u <= 0.0) {
            return Err(Error::InvalidParameter("cardinality caps must be > 0".into()));
        }
        if !(budget >= 0.0) || !budget.is_finite() {
            return Err(Error::InvalidParameter(format!("budget must be finite and >= 0, got {budget}")));
        }
        let total: f64 = upper.iter().sum();
        Ok(CardinalityPolytope {
            upper,
            budget: budget.min(total),
        })
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    fn clipped(&self, y: &[f64], tau: f64) -> Vec<f64> {
        y.iter()
            .zip(self.upper.iter())
            .map(|(&v, &u)| (v - tau).clamp(0.0, u))
            .collect()
    }
}

impl Region for CardinalityPolytope {
    fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Greedy: coordinates with `g_i > 0` in descending order (lower index on
    /// ties), each filled to its cap until the budget runs out.
    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>> {
        check_lmo_inputs(self.dim(), g, cap)?;
        let top = effective_upper(&self.upper, cap);
        let mut order: Vec<usize> = (0..g.len()).filter(|&i| g[i] > 0.0).collect();
        order.sort_by(|&a, &b| g[b].total_cmp(&g[a]).then(a.cmp(&b)));
        let mut v = vec![0.0; g.len()];
        let mut left = self.budget;
        for i in order {
            if left <= 0.0 {
                break;
            }
            let take = top[i].min(left);
            v[i] = take;
            left -= take;
        }
        Ok(v)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.upper.iter()).all(|(&v, &u)| v >= -tol && v <= u + tol)
            && x.iter().sum::<f64>() <= self.budget + tol
    }

    fn supports_projection(&self) -> bool {
        true
    }

    /// `x(τ) = clip(y − τ, 0, u)` with the smallest `τ ≥ 0` meeting the
    /// budget.
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), y.len())?;
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        let x0 = self.clipped(y, 0.0);
        if x0.iter().sum::<f64>() <= self.budget {
            return Ok(x0);
        }
        let excess = |tau: f64| self.clipped(y, tau).iter().sum::<f64>() - self.budget;
        let (mut lo, mut hi) = (0.0, y.iter().copied().fold(0.0, f64::max));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if excess(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // On the free set the sum is linear in τ; solve it exactly.
        let mut tau = hi;
        let (mut fixed, mut free_sum, mut free) = (0.0, 0.0, 0usize);
        for (&v, &u) in y.iter().zip(self.upper.iter()) {
            let c = v - hi;
            if c >= u {
                fixed += u;
            } else if c > 0.0 {
                free_sum += v;
                free += 1;
            }
        }
        if free > 0 {
            let exact = (free_sum + fixed - self.budget) / free as f64;
            if exact >= lo && exact <= hi {
                tau = exact;
            }
        }
        let x = self.clipped(y, tau);
        if x.iter().sum::<f64>() <= self.budget + 1e-12 * (1.0 + self.budget) {
            Ok(x)
        } else {
            Ok(self.clipped(y, hi))
        }
    }
}
