use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags, SetFunction};

/// A weighted concept and the items covering it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub weight: f64,
    pub covered_by: Vec<usize>,
}

/// Multilinear extension of weighted set cover,
/// `F(x) = Σ_c m_c [1 − Π_{i∈Γ⁻¹(c)} (1 − x_i)]`.
#[derive(Clone, Debug)]
pub struct SetCoverObjective {
    concepts: Vec<Concept>,
    domain: BoxDomain,
}

impl SetCoverObjective {
    pub fn new(n: usize, concepts: Vec<Concept>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("ground set must be non-empty".into()));
        }
        let mut normalized = Vec::with_capacity(concepts.len());
        for (c, mut concept) in concepts.into_iter().enumerate() {
            if !(concept.weight >= 0.0) || !concept.weight.is_finite() {
                return Err(Error::InvalidParameter(format!("concept {c} weight must be >= 0")));
            }
            concept.covered_by.sort_unstable();
            concept.covered_by.dedup();
            if concept.covered_by.is_empty() {
                return Err(Error::InvalidParameter(format!("concept {c} is covered by no item")));
            }
            if let Some(&i) = concept.covered_by.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidParameter(format!("item {i} out of range 0..{n}")));
            }
            normalized.push(concept);
        }
        Ok(SetCoverObjective {
            concepts: normalized,
            domain: BoxDomain::unit(n),
        })
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }
}

impl Objective for SetCoverObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        ObjectiveFlags::monotone_dr()
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        let mut value = 0.0;
        let mut grad = vec![0.0; x.len()];
        let mut prefix = Vec::new();
        for concept in &self.concepts {
            let items = &concept.covered_by;
            // prefix[k] = Π_{l<k} (1 − x_{items[l]})
            prefix.clear();
            prefix.push(1.0);
            for &i in items {
                let last = *prefix.last().unwrap();
                prefix.push(last * (1.0 - x[i]));
            }
            value += concept.weight * (1.0 - prefix[items.len()]);
            let mut suffix = 1.0;
            for (k, &i) in items.iter().enumerate().rev() {
                grad[i] += concept.weight * prefix[k] * suffix;
                suffix *= 1.0 - x[i];
            }
        }
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "set_cover"
    }
}

impl SetFunction for SetCoverObjective {
    fn ground_size(&self) -> usize {
        self.domain.dim()
    }

    fn eval_set(&self, members: &[bool]) -> Result<f64> {
        check_dim(self.ground_size(), members.len())?;
        Ok(self
            .concepts
            .iter()
            .filter(|c| c.covered_by.iter().any(|&i| members[i]))
            .map(|c| c.weight)
            .sum())
    }
}
