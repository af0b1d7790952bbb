//! Down-closed convex feasible regions.

mod cardinality;
mod polytope;
pub mod simplex;

use serde::{Deserialize, Serialize};

pub use cardinality::CardinalityPolytope;
pub use polytope::derive_upper_bound;
pub use polytope::DownClosedPolytope;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{dot, BoxDomain};

/// A down-closed convex region inside `[0, upper]`.
pub trait Region: Send + Sync {
    fn dim(&self) -> usize {
        self.upper().len()
    }

    /// A box enclosing the region.
    fn upper(&self) -> &[f64];

    /// A maximizer of `⟨v, g⟩` over the region intersected with `{v ≤ cap}`.
    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>>;

    fn contains(&self, x: &[f64], tol: f64) -> bool;

    fn supports_projection(&self) -> bool {
        false
    }

    /// Euclidean projection onto the region.
    fn project(&self, _y: &[f64]) -> Result<Vec<f64>> {
        Err(Error::Unsupported("projection onto this region".into()))
    }
}

pub(crate) fn check_lmo_inputs(n: usize, g: &[f64], cap: Option<&[f64]>) -> Result<()> {
    check_dim(n, g.len())?;
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    if let Some(cap) = cap {
        check_dim(n, cap.len())?;
        if cap.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::InvalidParameter("LMO cap must be >= 0".into()));
        }
    }
    Ok(())
}

/// `min(upper_i, cap_i)` per coordinate.
pub(crate) fn effective_upper(upper: &[f64], cap: Option<&[f64]>) -> Vec<f64> {
    match cap {
        Some(cap) => upper.iter().zip(cap).map(|(u, c)| u.min(*c)).collect(),
        None => upper.to_vec(),
    }
}

/// The box `[0, ū]` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxConstraint {
    domain: BoxDomain,
}

impl BoxConstraint {
    pub fn new(domain: BoxDomain) -> Self {
        BoxConstraint { domain }
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }
}

impl Region for BoxConstraint {
    fn upper(&self) -> &[f64] {
        self.domain.upper()
    }

    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>> {
        check_lmo_inputs(self.dim(), g, cap)?;
        let top = effective_upper(self.upper(), cap);
        Ok(g.iter().zip(top).map(|(&gi, u)| if gi > 0.0 { u } else { 0.0 }).collect())
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.domain.contains(x, tol)
    }

    fn supports_projection(&self) -> bool {
        true
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), y.len())?;
        Ok(self.domain.clip(y))
    }
}

/// `base ∩ {y ≤ cap}`, the region used by the second phase of the
/// non-monotone solver and by the shrunken LMO.
pub struct Shrunken<'a> {
    base: &'a dyn Region,
    cap: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> Shrunken<'a> {
    /// `cap` is clamped at zero from below.
    pub fn new(base: &'a dyn Region, cap: Vec<f64>) -> Result<Self> {
        check_dim(base.dim(), cap.len())?;
        let cap: Vec<f64> = cap.into_iter().map(|c| c.max(0.0)).collect();
        let upper = effective_upper(base.upper(), Some(&cap));
        Ok(Shrunken { base, cap, upper })
    }

    /// `base ∩ {y ≤ ū − x}`.
    pub fn complement_of(base: &'a dyn Region, upper: &[f64], x: &[f64]) -> Result<Self> {
        check_dim(upper.len(), x.len())?;
        Self::new(base, upper.iter().zip(x).map(|(u, v)| u - v).collect())
    }

    pub fn cap(&self) -> &[f64] {
        &self.cap
    }
}

impl Region for Shrunken<'_> {
    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>> {
        let combined = effective_upper(&self.cap, cap);
        self.base.lmo(g, Some(&combined))
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.cap.len()
            && x.iter().zip(&self.cap).all(|(v, c)| *v <= c + tol)
            && self.base.contains(x, tol)
    }
}

/// A scalar bound broadcast to every coordinate, or one bound per
/// coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Bound {
    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Bound::Scalar(u) => Ok(vec![*u; n]),
            Bound::Vector(v) => {
                check_dim(n, v.len())?;
                Ok(v.clone())
            }
        }
    }
}

/// Serialized description of a constraint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    /// The box; `upper` defaults to the objective's domain.
    Box {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<Bound>,
    },
    /// `{0 ≤ x ≤ u, Σ x ≤ b}`.
    Cardinality { u: Bound, b: f64 },
    /// `{x ≥ 0, A x ≤ b}` with `A > 0`.
    Polytope { a: Vec<Vec<f64>>, b: Vec<f64> },
}

impl ConstraintSpec {
    pub fn build(&self, n: usize) -> Result<Constraint> {
        match self {
            ConstraintSpec::Box { upper } => {
                let upper = upper.as_ref().map_or(Ok(vec![1.0; n]), |u| u.resolve(n))?;
                Ok(Constraint::Box(BoxConstraint::new(BoxDomain::new(upper)?)))
            }
            ConstraintSpec::Cardinality { u, b } => {
                Ok(Constraint::Cardinality(CardinalityPolytope::new(u.resolve(n)?, *b)?))
            }
            ConstraintSpec::Polytope { a, b } => {
                let p = DownClosedPolytope::new(a.clone(), b.clone())?;
                check_dim(n, p.dim())?;
                Ok(Constraint::Polytope(p))
            }
        }
    }

    /// Like [`ConstraintSpec::build`], with a missing box bound taken from
    /// `domain`.
    pub fn build_for(&self, domain: &BoxDomain) -> Result<Constraint> {
        match self {
            ConstraintSpec::Box { upper: None } => Ok(Constraint::Box(BoxConstraint::new(domain.clone()))),
            _ => self.build(domain.dim()),
        }
    }
}

/// Any of the supported regions.
#[derive(Clone, Debug)]
pub enum Constraint {
    Box(BoxConstraint),
    Cardinality(CardinalityPolytope),
    Polytope(DownClosedPolytope),
}

impl Constraint {
    fn inner(&self) -> &dyn Region {
        match self {
            Constraint::Box(c) => c,
            Constraint::Cardinality(c) => c,
            Constraint::Polytope(c) => c,
        }
    }

    pub fn spec(&self) -> ConstraintSpec {
        match self {
            Constraint::Box(c) => ConstraintSpec::Box {
                upper: Some(Bound::Vector(c.upper().to_vec())),
            },
            Constraint::Cardinality(c) => ConstraintSpec::Cardinality {
                u: Bound::Vector(c.upper().to_vec()),
                b: c.budget(),
            },
            Constraint::Polytope(c) => ConstraintSpec::Polytope {
                a: c.a().to_vec(),
                b: c.b().to_vec(),
            },
        }
    }
}

impl Region for Constraint {
    fn upper(&self) -> &[f64] {
        self.inner().upper()
    }

    fn lmo(&self, g: &[f64], cap: Option<&[f64]>) -> Result<Vec<f64>> {
        self.inner().lmo(g, cap)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.inner().contains(x, tol)
    }

    fn supports_projection(&self) -> bool {
        self.inner().supports_projection()
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.inner().project(y)
    }
}

/// `⟨v, g⟩` at the LMO output.
pub fn lmo_value(region: &dyn Region, g: &[f64]) -> Result<f64> {
    Ok(dot(&region.lmo(g, None)?, g))
}
