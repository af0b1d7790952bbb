use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::compose::{compose, Composed, Direction, Jacobian, MapFlags, VectorMap};
use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags};

/// `ln(1 − p)` is evaluated with `p` capped here so derivatives stay finite
/// when `p = 1`.
const P_CAP: f64 = 1.0 - 1e-15;

/// `(1 − p)^x`, with `(1 − 1)^x = 0` for `x > 0` and `1` at `x = 0`.
pub(crate) fn survival(p: f64, x: f64) -> f64 {
    if p >= 1.0 {
        if x > 0.0 {
            0.0
        } else {
            1.0
        }
    } else {
        (x * (1.0 - p).ln()).exp()
    }
}

fn neg_log_survival(p: f64) -> f64 {
    -(1.0 - p.min(P_CAP)).ln()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// How investments activate customers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Activation {
    /// One action per customer: `aⁱ(x_i) = 1 − (1 − p_i)^{x_i}`.
    Independent { p: Vec<f64> },
    /// `aᵗ(x) = 1 − Π_{(s,t)} (1 − p_st)^{x_s}` over action→customer edges.
    Bipartite {
        actions: usize,
        customers: usize,
        edges: Vec<(usize, usize, f64)>,
    },
}

impl Activation {
    pub fn input_dim(&self) -> usize {
        match self {
            Activation::Independent { p } => p.len(),
            Activation::Bipartite { actions, .. } => *actions,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Activation::Independent { p } => p.len(),
            Activation::Bipartite { customers, .. } => *customers,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Activation::Independent { p } => p.iter().try_for_each(|&p| check_probability(p)),
            Activation::Bipartite { actions, customers, edges } => {
                for &(s, t, p) in edges {
                    if s >= *actions || t >= *customers {
                        return Err(Error::InvalidParameter(format!("edge ({s}, {t}) out of range")));
                    }
                    check_probability(p)?;
                }
                Ok(())
            }
        }
    }
}

/// An [`Activation`] over an investment box, as a composable map.
#[derive(Clone, Debug)]
pub struct ActivationMap {
    activation: Activation,
    domain: BoxDomain,
}

impl ActivationMap {
    pub fn new(activation: Activation, domain: BoxDomain) -> Result<Self> {
        activation.validate()?;
        check_dim(activation.input_dim(), domain.dim())?;
        Ok(ActivationMap { activation, domain })
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }
}

impl VectorMap for ActivationMap {
    fn input_domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn output_dim(&self) -> usize {
        self.activation.output_dim()
    }

    fn map_flags(&self) -> MapFlags {
        // Both realizations are 1 − exp(−(nonnegative linear form)):
        // nondecreasing with all second derivatives ≤ 0.
        MapFlags {
            direction: Direction::Nondecreasing,
            dr_submodular: true,
            ir_supermodular: false,
            separable: matches!(self.activation, Activation::Independent { .. }),
            identity: false,
        }
    }

    fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, Jacobian)> {
        self.domain.check(x)?;
        match &self.activation {
            Activation::Independent { p } => {
                let mut a = Vec::with_capacity(p.len());
                let mut d = Vec::with_capacity(p.len());
                for (&pi, &xi) in p.iter().zip(x) {
                    let s = survival(pi, xi);
                    a.push(1.0 - s);
                    d.push(neg_log_survival(pi) * s);
                }
                Ok((a, Jacobian::Diagonal(d)))
            }
            Activation::Bipartite { actions, customers, edges } => {
                let mut surv = vec![1.0; *customers];
                for &(s, t, p) in edges {
                    surv[t] *= survival(p, x[s]);
                }
                let mut jac = DMatrix::zeros(*customers, *actions);
                for &(s, t, p) in edges {
                    jac[(t, s)] += neg_log_survival(p) * surv[t];
                }
                Ok((surv.iter().map(|s| 1.0 - s).collect(), Jacobian::Dense(jac)))
            }
        }
    }
}

/// Expected influence `f(x) = Σ_S F(S) Π_{i∈S} aⁱ(x) Π_{j∉S} (1 − aʲ(x))`,
/// i.e. the multilinear extension of `F` read at the activation
/// probabilities.
#[derive(Clone)]
pub struct InfluenceObjective {
    composed: Composed,
}

impl InfluenceObjective {
    /// `model` is the multilinear extension of `F` over `[0,1]ⁿ` (closed
    /// form or sampled); `domain` bounds the investments.
    pub fn new(model: Arc<dyn Objective>, activation: Activation, domain: BoxDomain) -> Result<Self> {
        check_dim(model.dim(), activation.output_dim())?;
        let map = ActivationMap::new(activation, domain)?;
        Ok(InfluenceObjective {
            composed: compose(model, Arc::new(map))?,
        })
    }

    pub fn model(&self) -> &Arc<dyn Objective> {
        self.composed.outer()
    }

    /// Activation probabilities `a(x)`.
    pub fn activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.composed.inner().apply(x)?.0)
    }
}

impl Objective for InfluenceObjective {
    fn domain(&self) -> &BoxDomain {
        self.composed.domain()
    }

    fn flags(&self) -> ObjectiveFlags {
        self.composed.flags()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.composed.value(x)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.composed.eval_grad(x)
    }

    fn name(&self) -> &str {
        "influence"
    }
}
