use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::build::{
    build_influence_instance_with_cap, build_revenue_instance, revenue_preset, DEFAULT_INFLUENCE_BUDGET_FRACTION,
    DEFAULT_INFLUENCE_CAP,
};
use super::generate::{gen_quadratic_instance, gen_softmax_instance, synthetic_bipartite, synthetic_social};
use super::graph::{load_bipartite, load_social, BipartiteGraph, SocialGraph};
use crate::constraints::{Bound, Constraint, ConstraintSpec, Region};
use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags, SetFunction};
use crate::objectives::{
    Activation, Concept, FlidObjective, GibbsPolynomial, InfluenceObjective, MeanFieldKLObjective, QuadraticObjective,
    RevenueIEObjective, SampledMultilinear, SetCoverObjective, SoftmaxObjective, Term, TwoBumps,
};

fn default_cap() -> f64 {
    DEFAULT_INFLUENCE_CAP
}

/// An objective family and its parameters. Matrices are row-major; graph
/// paths are resolved against the instance file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// `½ xᵀHx + hᵀx + c` on `[0, upper]`; `upper` defaults to `1`.
    Quadratic {
        hessian: Vec<Vec<f64>>,
        linear: Vec<f64>,
        #[serde(default)]
        constant: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<Bound>,
    },
    Softmax { kernel: Vec<Vec<f64>> },
    Gibbs { n: usize, terms: Vec<Term> },
    Cut {
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        #[serde(default)]
        directed: bool,
    },
    Ising { unary: Vec<f64>, pairwise: Vec<(usize, usize, f64)> },
    /// `weights` has one row per item; `utilities` default to zero.
    Flid {
        weights: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        utilities: Option<Vec<f64>>,
    },
    SetCover { n: usize, concepts: Vec<Concept> },
    /// A set function's multilinear extension estimated by sampling.
    Sampled { model: Box<ObjectiveSpec>, samples: usize, seed: u64 },
    Influence { model: Box<ObjectiveSpec>, activation: Activation, upper: Bound },
    /// Facility-location influence over a user–forum edge list, restricted
    /// to the first `users` users and `forums` forums when given.
    InfluenceGraph {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        users: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forums: Option<usize>,
        #[serde(default = "default_cap")]
        cap: f64,
    },
    Revenue { weights: Vec<Vec<f64>>, q: f64, upper: Bound },
    /// Revenue over a contact edge list on `[0, u]ⁿ`.
    RevenueGraph {
        path: PathBuf,
        q: f64,
        u: f64,
        #[serde(default)]
        symmetrize: bool,
    },
    MeanField { model: Box<ObjectiveSpec> },
    TwoBumps,
}

/// A complete problem description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub objective: ObjectiveSpec,
    #[serde(default = "default_constraint")]
    pub constraint: ConstraintSpec,
    #[serde(default)]
    pub seed: u64,
}

fn default_constraint() -> ConstraintSpec {
    ConstraintSpec::Box { upper: None }
}

/// A built instance.
#[derive(Clone)]
pub struct Problem {
    pub objective: Arc<dyn Objective>,
    pub constraint: Constraint,
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    for r in rows {
        check_dim(m, r.len())?;
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn resolve(base: Option<&Path>, path: &Path) -> PathBuf {
    match base {
        Some(b) if path.is_relative() => b.join(path),
        _ => path.to_path_buf(),
    }
}

impl ObjectiveSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ObjectiveSpec::Quadratic { .. } => "quadratic",
            ObjectiveSpec::Softmax { .. } => "softmax",
            ObjectiveSpec::Gibbs { .. } => "gibbs",
            ObjectiveSpec::Cut { .. } => "cut",
            ObjectiveSpec::Ising { .. } => "ising",
            ObjectiveSpec::Flid { .. } => "flid",
            ObjectiveSpec::SetCover { .. } => "set_cover",
            ObjectiveSpec::Sampled { .. } => "sampled",
            ObjectiveSpec::Influence { .. } => "influence",
            ObjectiveSpec::InfluenceGraph { .. } => "influence_graph",
            ObjectiveSpec::Revenue { .. } => "revenue",
            ObjectiveSpec::RevenueGraph { .. } => "revenue_graph",
            ObjectiveSpec::MeanField { .. } => "mean_field",
            ObjectiveSpec::TwoBumps => "two_bumps",
        }
    }

    /// Builds the set-function families, for which the objective is a
    /// multilinear extension.
    pub fn build_set_function(&self) -> Result<(Arc<dyn SetFunction>, ObjectiveFlags)> {
        fn wrap<T: SetFunction + Objective + 'static>(t: T) -> (Arc<dyn SetFunction>, ObjectiveFlags) {
            let flags = t.flags();
            (Arc::new(t), flags)
        }
        Ok(match self {
            ObjectiveSpec::Gibbs { n, terms } => wrap(GibbsPolynomial::new(*n, terms.clone())?),
            ObjectiveSpec::Cut { n, edges, directed: false } => wrap(GibbsPolynomial::undirected_cut(*n, edges)?),
            ObjectiveSpec::Cut { n, edges, directed: true } => wrap(GibbsPolynomial::directed_cut(*n, edges)?),
            ObjectiveSpec::Ising { unary, pairwise } => wrap(GibbsPolynomial::ising(unary, pairwise)?),
            ObjectiveSpec::Flid { weights, utilities } => wrap(flid(weights, utilities)?),
            ObjectiveSpec::SetCover { n, concepts } => wrap(SetCoverObjective::new(*n, concepts.clone())?),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "family `{}` is not a set function",
                    other.family()
                )))
            }
        })
    }

    pub fn build(&self, base: Option<&Path>) -> Result<Arc<dyn Objective>> {
        Ok(match self {
            ObjectiveSpec::Quadratic { hessian, linear, constant, upper } => {
                let h = matrix_from_rows(hessian)?;
                let n = linear.len();
                let upper = upper.as_ref().map_or(Ok(vec![1.0; n]), |u| u.resolve(n))?;
                Arc::new(QuadraticObjective::new(h, linear.clone(), *constant, BoxDomain::new(upper)?)?)
            }
            ObjectiveSpec::Softmax { kernel } => Arc::new(SoftmaxObjective::new(matrix_from_rows(kernel)?)?),
            ObjectiveSpec::Gibbs { n, terms } => Arc::new(GibbsPolynomial::new(*n, terms.clone())?),
            ObjectiveSpec::Cut { n, edges, directed } => Arc::new(if *directed {
                GibbsPolynomial::directed_cut(*n, edges)?
            } else {
                GibbsPolynomial::undirected_cut(*n, edges)?
            }),
            ObjectiveSpec::Ising { unary, pairwise } => Arc::new(GibbsPolynomial::ising(unary, pairwise)?),
            ObjectiveSpec::Flid { weights, utilities } => Arc::new(flid(weights, utilities)?),
            ObjectiveSpec::SetCover { n, concepts } => Arc::new(SetCoverObjective::new(*n, concepts.clone())?),
            ObjectiveSpec::Sampled { model, samples, seed } => {
                let (f, flags) = model.build_set_function()?;
                Arc::new(SampledMultilinear::new(f, *samples, *seed, flags)?)
            }
            ObjectiveSpec::Influence { model, activation, upper } => {
                let n = activation.input_dim();
                let domain = BoxDomain::new(upper.resolve(n)?)?;
                Arc::new(InfluenceObjective::new(model.build(base)?, activation.clone(), domain)?)
            }
            ObjectiveSpec::InfluenceGraph { path, users, forums, cap } => {
                let g = load_bipartite(resolve(base, path))?;
                let g = g.subgraph(users.unwrap_or(g.users), forums.unwrap_or(g.forums));
                Arc::new(build_influence_instance_with_cap(&g, *cap)?)
            }
            ObjectiveSpec::Revenue { weights, q, upper } => {
                let domain = BoxDomain::new(upper.resolve(weights.len())?)?;
                Arc::new(RevenueIEObjective::new(weights.clone(), *q, domain)?)
            }
            ObjectiveSpec::RevenueGraph { path, q, u, symmetrize } => {
                let mut g = load_social(resolve(base, path))?;
                if *symmetrize {
                    g = g.symmetrized();
                }
                Arc::new(build_revenue_instance(&g, *q, *u, 1.0)?.0)
            }
            ObjectiveSpec::MeanField { model } => Arc::new(MeanFieldKLObjective::new(model.build(base)?)?),
            ObjectiveSpec::TwoBumps => Arc::new(TwoBumps::new()),
        })
    }
}

fn flid(weights: &[Vec<f64>], utilities: &Option<Vec<f64>>) -> Result<FlidObjective> {
    match utilities {
        Some(u) => FlidObjective::new(weights.to_vec(), u.clone()),
        None => FlidObjective::facility_location(weights.to_vec()),
    }
}

impl Instance {
    pub fn new(objective: ObjectiveSpec, constraint: ConstraintSpec, seed: u64) -> Self {
        Instance { objective, constraint, seed }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// Builds the objective and constraint; relative graph paths are taken
    /// from `base`. A box constraint without bounds uses the objective's
    /// domain.
    pub fn build(&self, base: Option<&Path>) -> Result<Problem> {
        let objective = self.objective.build(base)?;
        let constraint = self.constraint.build_for(objective.domain())?;
        check_dim(objective.dim(), constraint.dim())?;
        Ok(Problem { objective, constraint })
    }
}

/// Families `generate` accepts.
pub const GENERATED_FAMILIES: [&str; 5] = ["softmax", "quadratic", "quadratic_monotone", "influence", "revenue"];

/// A random instance of size `n` with every parameter written out.
///
/// `influence` uses `n` users and `max(1, n / 5)` forums with the default
/// cap and budget fraction; `revenue` uses a contact graph of density 0.1
/// with the `reality_mining` parameters.
pub fn generate(family: &str, n: usize, seed: u64) -> Result<Instance> {
    let (objective, constraint) = match family {
        "softmax" => {
            let (f, c) = gen_softmax_instance(n, seed)?;
            (ObjectiveSpec::Softmax { kernel: matrix_rows(f.kernel()) }, Constraint::Cardinality(c).spec())
        }
        "quadratic" | "quadratic_monotone" => {
            let (f, c) = gen_quadratic_instance(n, family == "quadratic_monotone", seed)?;
            let spec = ObjectiveSpec::Quadratic {
                hessian: matrix_rows(f.hessian()),
                linear: f.linear_term().to_vec(),
                constant: f.constant(),
                upper: Some(Bound::Vector(f.domain().upper().to_vec())),
            };
            (spec, Constraint::Cardinality(c).spec())
        }
        "influence" => {
            let g = synthetic_bipartite(n, (n / 5).max(1), seed)?;
            influence_instance(&g, DEFAULT_INFLUENCE_CAP, DEFAULT_INFLUENCE_BUDGET_FRACTION)?
        }
        "revenue" => {
            let g = synthetic_social(n, 0.1, seed)?;
            let p = revenue_preset("reality_mining")?;
            revenue_instance(&g, p.q, p.u, p.budget_fraction)?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family `{other}`; expected one of {}",
                GENERATED_FAMILIES.join(", ")
            )))
        }
    };
    Ok(Instance::new(objective, constraint, seed))
}

/// Inline influence instance for `g` with a budget constraint.
pub fn influence_instance(g: &BipartiteGraph, cap: f64, fraction: f64) -> Result<(ObjectiveSpec, ConstraintSpec)> {
    let f = build_influence_instance_with_cap(g, cap)?;
    let spec = ObjectiveSpec::Influence {
        model: Box::new(ObjectiveSpec::Flid { weights: g.weight_rows(), utilities: None }),
        activation: Activation::Independent { p: super::build::activation_probabilities(g) },
        upper: Bound::Vector(f.domain().upper().to_vec()),
    };
    let c = super::build::budget_constraint(g.users, cap, fraction)?;
    Ok((spec, Constraint::Cardinality(c).spec()))
}

/// Inline revenue instance for `g`.
pub fn revenue_instance(g: &SocialGraph, q: f64, u: f64, fraction: f64) -> Result<(ObjectiveSpec, ConstraintSpec)> {
    let (f, c) = build_revenue_instance(g, q, u, fraction)?;
    let spec = ObjectiveSpec::Revenue {
        weights: f.weights().to_vec(),
        q,
        upper: Bound::Vector(f.domain().upper().to_vec()),
    };
    Ok((spec, Constraint::Cardinality(c).spec()))
}
