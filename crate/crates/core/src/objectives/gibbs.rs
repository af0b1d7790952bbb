use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags, SetFunction};

/// One monomial `θ Πᵢ∈T xᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub vars: Vec<usize>,
}

/// Multilinear extension of a pseudo-Boolean polynomial
/// `F(v) = Σ_T θ_T Π_{i∈T} v_i`, which is the same polynomial read on `[0,1]ⁿ`.
///
/// Covers graph cuts and Ising models. The declared submodular/DR flag is
/// set when every term on two or more variables has a nonpositive
/// coefficient (all cross partials are then `≤ 0`, and the function is
/// coordinate-wise linear).
#[derive(Clone, Debug)]
pub struct GibbsPolynomial {
    terms: Vec<Term>,
    domain: BoxDomain,
    flags: ObjectiveFlags,
}

impl GibbsPolynomial {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("ground set must be non-empty".into()));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for mut t in terms {
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidParameter("term coefficient must be finite".into()));
            }
            t.vars.sort_unstable();
            if t.vars.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "term {:?} repeats a variable",
                    t.vars
                )));
            }
            if let Some(&v) = t.vars.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidParameter(format!("variable {v} out of range 0..{n}")));
            }
            normalized.push(t);
        }
        let submodular = normalized
            .iter()
            .all(|t| t.vars.len() < 2 || t.coefficient <= 0.0);
        // Products of other coordinates lie in [0, 1], so a negative
        // interaction can cancel at most |θ| of the linear term.
        let mut worst = vec![0.0; n];
        for t in &normalized {
            match t.vars.len() {
                0 => {}
                1 => worst[t.vars[0]] += t.coefficient,
                _ => t.vars.iter().for_each(|&i| worst[i] += t.coefficient.min(0.0)),
            }
        }
        let monotone = worst.iter().all(|&w| w >= 0.0);
        Ok(GibbsPolynomial {
            terms: normalized,
            domain: BoxDomain::unit(n),
            flags: ObjectiveFlags::new(monotone, submodular, submodular),
        })
    }

    /// `Σ w_ij (x_i + x_j − 2 x_i x_j)` over unordered edges, i.e.
    /// `½ Σ_{i,j} W_ij (x_i + x_j − 2 x_i x_j)` for the symmetric weight
    /// matrix.
    pub fn undirected_cut(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(3 * edges.len());
        for &(i, j, w) in edges {
            if i == j {
                return Err(Error::InvalidParameter("self-loop in cut graph".into()));
            }
            terms.push(Term { coefficient: w, vars: vec![i] });
            terms.push(Term { coefficient: w, vars: vec![j] });
            terms.push(Term { coefficient: -2.0 * w, vars: vec![i, j] });
        }
        Self::new(n, terms)
    }

    /// `Σ w_ij x_i (1 − x_j)`.
    pub fn directed_cut(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(2 * edges.len());
        for &(i, j, w) in edges {
            if i == j {
                return Err(Error::InvalidParameter("self-loop in cut graph".into()));
            }
            terms.push(Term { coefficient: w, vars: vec![i] });
            terms.push(Term { coefficient: -w, vars: vec![i, j] });
        }
        Self::new(n, terms)
    }

    /// `Σ_s θ_s x_s + Σ_(s,t) θ_st x_s x_t`.
    pub fn ising(unary: &[f64], pairwise: &[(usize, usize, f64)]) -> Result<Self> {
        let mut terms: Vec<Term> = unary
            .iter()
            .enumerate()
            .map(|(s, &c)| Term { coefficient: c, vars: vec![s] })
            .collect();
        terms.extend(
            pairwise
                .iter()
                .map(|&(s, t, c)| Term { coefficient: c, vars: vec![s, t] }),
        );
        Self::new(unary.len(), terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

impl Objective for GibbsPolynomial {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        self.flags
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.domain.check(x)?;
        let mut value = 0.0;
        let mut grad = vec![0.0; x.len()];
        for t in &self.terms {
            value += t.coefficient * t.vars.iter().map(|&i| x[i]).product::<f64>();
            for (k, &i) in t.vars.iter().enumerate() {
                let others: f64 = t
                    .vars
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != k)
                    .map(|(_, &j)| x[j])
                    .product();
                grad[i] += t.coefficient * others;
            }
        }
        Ok((value, grad))
    }

    fn name(&self) -> &str {
        "gibbs"
    }
}

impl SetFunction for GibbsPolynomial {
    fn ground_size(&self) -> usize {
        self.domain.dim()
    }

    fn eval_set(&self, members: &[bool]) -> Result<f64> {
        check_dim(self.ground_size(), members.len())?;
        Ok(self
            .terms
            .iter()
            .filter(|t| t.vars.iter().all(|&i| members[i]))
            .map(|t| t.coefficient)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_point_reads_constant_and_unary_terms() {
        let f = GibbsPolynomial::new(
            3,
            vec![
                Term { coefficient: 2.0, vars: vec![] },
                Term { coefficient: 0.5, vars: vec![1] },
                Term { coefficient: -1.0, vars: vec![0, 2] },
                Term { coefficient: 3.0, vars: vec![0, 1, 2] },
            ],
        )
        .unwrap();
        let (v, g) = f.eval_grad(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(g, vec![0.0, 0.5, 0.0]);
        assert!(!f.flags().submodular);
    }

    #[test]
    fn ising_single_edge() {
        let f = GibbsPolynomial::ising(&[1.0, 1.0], &[(0, 1, -1.0)]).unwrap();
        assert_eq!(f.value(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(f.eval_set(&[true, true]).unwrap(), 1.0);
        assert!(f.flags().dr_submodular && f.flags().monotone);
    }

    #[test]
    fn cut_is_dr_but_not_monotone() {
        let f = GibbsPolynomial::undirected_cut(2, &[(0, 1, 1.0)]).unwrap();
        assert!(f.flags().dr_submodular);
        assert!(!f.flags().monotone);
        assert_eq!(f.eval_set(&[true, false]).unwrap(), 1.0);
        assert_eq!(f.eval_set(&[true, true]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_repeated_and_out_of_range_vars() {
        assert!(GibbsPolynomial::new(2, vec![Term { coefficient: 1.0, vars: vec![1, 1] }]).is_err());
        assert!(GibbsPolynomial::new(2, vec![Term { coefficient: 1.0, vars: vec![2] }]).is_err());
    }
}
