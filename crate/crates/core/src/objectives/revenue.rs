use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags};

/// Revenue under the influence-and-exploit model,
/// `f(x) = Σ_i Σ_{j≠i} W_ij (1 − q^{x_i}) q^{x_j}`.
///
/// This is a directed cut read through the separable monotone map
/// `x_i ↦ 1 − q^{x_i}`, so it is submodular but in general neither DR nor
/// monotone.
#[derive(Clone, Debug)]
pub struct RevenueIEObjective {
    /// Row-major `n × n`, zero diagonal.
    weights: Vec<Vec<f64>>,
    q: f64,
    ln_q: f64,
    domain: BoxDomain,
}

impl RevenueIEObjective {
    pub fn new(weights: Vec<Vec<f64>>, q: f64, domain: BoxDomain) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0, 1), got {q}")));
        }
        let n = domain.dim();
        check_dim(n, weights.len())?;
        for (i, row) in weights.iter().enumerate() {
            check_dim(n, row.len())?;
            if row.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
                return Err(Error::InvalidParameter(format!("row {i} has a negative or non-finite weight")));
            }
            if row[i] != 0.0 {
                return Err(Error::InvalidParameter(format!("self-loop weight at node {i}")));
            }
        }
        Ok(RevenueIEObjective {
            weights,
            q,
            ln_q: q.ln(),
            domain,
        })
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn powers(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| (v * self.ln_q).exp()).collect()
    }
}

impl Objective for RevenueIEObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        ObjectiveFlags::new(false, false, true)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain.check(x)?;
        let qx = self.powers(x);
        let mut value = 0.0;
        for (i, row) in self.weights.iter().enumerate() {
            let inner: f64 = row.iter().zip(&qx).map(|(w, q)| w * q).sum();
            value += (1.0 - qx[i]) * inner;
        }
        Ok(value)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        let n = x.len();
        let qx = self.powers(x);
        // out[s] = Σ_j W_sj q^{x_j}; inc[s] = Σ_i W_is (1 − q^{x_i})
        let mut out = vec![0.0; n];
        let mut inc = vec![0.0; n];
        for (i, row) in self.weights.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w != 0.0 {
                    out[i] += w * qx[j];
                    inc[j] += w * (1.0 - qx[i]);
                }
            }
        }
        let value = (0..n).map(|i| (1.0 - qx[i]) * out[i]).sum();
        let grad = (0..n)
            .map(|s| -self.ln_q * qx[s] * (out[s] - inc[s]))
            .collect();
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "revenue_ie"
    }
}
