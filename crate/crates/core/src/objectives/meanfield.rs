use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags};

/// Coordinates are clamped into `[CLAMP, 1 − CLAMP]` before evaluation.
pub const CLAMP: f64 = 1e-9;

/// Negated mean-field divergence
/// `−KL(x) + log Z = F̃(x) − Σ_i [x_i ln x_i + (1 − x_i) ln(1 − x_i)]`,
/// where `F̃` is the multilinear extension of the log-density `F`.
///
/// `log Z` is a constant and is dropped. When `F` is submodular the result is
/// DR-submodular.
pub struct MeanFieldKLObjective {
    model: Arc<dyn Objective>,
    domain: BoxDomain,
    clamped: AtomicU64,
}

impl MeanFieldKLObjective {
    /// `model` must live on the unit box.
    pub fn new(model: Arc<dyn Objective>) -> Result<Self> {
        let n = model.dim();
        if model.domain() != &BoxDomain::unit(n) {
            return Err(Error::InvalidParameter("mean-field model must be defined on [0,1]^n".into()));
        }
        Ok(MeanFieldKLObjective {
            model,
            domain: BoxDomain::unit(n),
            clamped: AtomicU64::new(0),
        })
    }

    /// Number of coordinates moved by the entropy guard so far.
    pub fn clamp_count(&self) -> u64 {
        self.clamped.load(Ordering::Relaxed)
    }

    fn guard(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain.check(x)?;
        let mut moved = 0;
        let y = x
            .iter()
            .map(|&v| {
                let c = v.clamp(CLAMP, 1.0 - CLAMP);
                if c != v {
                    moved += 1;
                }
                c
            })
            .collect();
        if moved > 0 {
            self.clamped.fetch_add(moved, Ordering::Relaxed);
        }
        Ok(y)
    }
}

fn entropy(v: f64) -> f64 {
    -(v * v.ln() + (1.0 - v) * (1.0 - v).ln())
}

impl Objective for MeanFieldKLObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        let sub = self.model.flags().submodular;
        ObjectiveFlags::new(false, sub, sub)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let y = self.guard(x)?;
        Ok(self.model.value(&y)? + y.iter().map(|&v| entropy(v)).sum::<f64>())
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let y = self.guard(x)?;
        let (m, mut grad) = self.model.eval_grad(&y)?;
        for (g, &v) in grad.iter_mut().zip(&y) {
            *g -= v.ln() - (1.0 - v).ln();
        }
        Ok((m + y.iter().map(|&v| entropy(v)).sum::<f64>(), grad))
    }

    fn name(&self) -> &str {
        "mean_field_kl"
    }
}
