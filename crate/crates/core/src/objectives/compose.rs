//! Composition `g = f ∘ h` with structure flags derived from the
//! DR-preserving composition rules and the separable-reparameterization rule.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
    Unknown,
}

impl Direction {
    fn then(self, inner: Direction) -> Direction {
        use Direction::*;
        match (self, inner) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (a, b) if a == b => Nondecreasing,
            _ => Nonincreasing,
        }
    }
}

/// Structure of a map `h: ℝᵐ → ℝⁿ`, componentwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFlags {
    pub direction: Direction,
    pub dr_submodular: bool,
    pub ir_supermodular: bool,
    /// `m = n` and `hᵏ` depends on `x_k` only.
    pub separable: bool,
    pub identity: bool,
}

/// Structure of a scalar function in the vocabulary of the composition rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Shape {
    pub direction: Option<Direction>,
    pub dr_submodular: bool,
    pub ir_supermodular: bool,
    pub submodular: bool,
    pub supermodular: bool,
}

impl Shape {
    pub fn from_flags(flags: &ObjectiveFlags) -> Shape {
        Shape {
            direction: flags.monotone.then_some(Direction::Nondecreasing),
            dr_submodular: flags.dr_submodular,
            ir_supermodular: false,
            submodular: flags.submodular,
            supermodular: false,
        }
    }
}

/// Shape of `f ∘ h`. Requires `h` monotone; otherwise nothing is known.
///
/// 1. f DR, nondecreasing; h DR ⇒ g DR.
/// 2. f DR, nonincreasing; h IR ⇒ g DR.
/// 3. f IR, nondecreasing; h IR ⇒ g IR.
/// 4. f IR, nonincreasing; h DR ⇒ g IR.
///
/// A separable monotone `h` keeps (super)submodularity of `f`.
pub fn compose_shape(f: Shape, h: MapFlags) -> Shape {
    use Direction::*;
    if h.direction == Unknown {
        return Shape::default();
    }
    let dir = f.direction.unwrap_or(Unknown);
    let dr = f.dr_submodular
        && ((dir == Nondecreasing && h.dr_submodular) || (dir == Nonincreasing && h.ir_supermodular));
    let ir = f.ir_supermodular
        && ((dir == Nondecreasing && h.ir_supermodular) || (dir == Nonincreasing && h.dr_submodular));
    let submodular = dr || (h.separable && f.submodular);
    let supermodular = ir || (h.separable && f.supermodular);
    let direction = match dir.then(h.direction) {
        Unknown => None,
        d => Some(d),
    };
    Shape {
        direction,
        dr_submodular: dr,
        ir_supermodular: ir,
        submodular,
        supermodular,
    }
}

/// Jacobian of a vector map, rows indexed by output.
#[derive(Clone, Debug)]
pub enum Jacobian {
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
}

impl Jacobian {
    /// `Jᵀ v`.
    pub fn transpose_mul(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Jacobian::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            Jacobian::Dense(j) => (0..j.ncols())
                .map(|s| (0..j.nrows()).map(|k| j[(k, s)] * v[k]).sum())
                .collect(),
        }
    }
}

/// A differentiable map from a box into ℝⁿ.
pub trait VectorMap: Send + Sync {
    fn input_domain(&self) -> &BoxDomain;

    fn output_dim(&self) -> usize;

    fn map_flags(&self) -> MapFlags;

    fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, Jacobian)>;
}

/// `h(x) = x`.
#[derive(Clone, Debug)]
pub struct IdentityMap {
    domain: BoxDomain,
}

impl IdentityMap {
    pub fn new(domain: BoxDomain) -> Self {
        IdentityMap { domain }
    }
}

impl VectorMap for IdentityMap {
    fn input_domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn output_dim(&self) -> usize {
        self.domain.dim()
    }

    fn map_flags(&self) -> MapFlags {
        MapFlags {
            direction: Direction::Nondecreasing,
            dr_submodular: true,
            ir_supermodular: true,
            separable: true,
            identity: true,
        }
    }

    fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, Jacobian)> {
        self.domain.check(x)?;
        Ok((x.to_vec(), Jacobian::Diagonal(vec![1.0; x.len()])))
    }
}

/// `f ∘ h` with chain-rule gradient `∇g(x) = ∇h(x)ᵀ ∇f(h(x))`.
#[derive(Clone)]
pub struct Composed {
    outer: Arc<dyn Objective>,
    inner: Arc<dyn VectorMap>,
    flags: ObjectiveFlags,
    shape: Shape,
}

impl Composed {
    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn outer(&self) -> &Arc<dyn Objective> {
        &self.outer
    }

    pub fn inner(&self) -> &Arc<dyn VectorMap> {
        &self.inner
    }
}

/// Builds `f ∘ h`. Fails when the output dimension of `h` differs from the
/// dimension of `f`, or when a monotone `h` sends a corner of its domain
/// outside `f`'s domain.
pub fn compose(outer: Arc<dyn Objective>, inner: Arc<dyn VectorMap>) -> Result<Composed> {
    check_dim(outer.dim(), inner.output_dim())?;
    let mflags = inner.map_flags();
    if mflags.direction != Direction::Unknown {
        // A monotone map attains its coordinate-wise extremes at 0 and ū.
        let lo = inner.input_domain().lower();
        let hi = inner.input_domain().upper().to_vec();
        for corner in [lo, hi] {
            let (y, _) = inner.apply(&corner)?;
            if !outer.domain().contains(&y, crate::lattice::TOL) {
                return Err(Error::InvalidParameter(
                    "map range leaves the outer objective's domain".into(),
                ));
            }
        }
    }
    let fflags = outer.flags();
    let shape = compose_shape(Shape::from_flags(&fflags), mflags);
    let mut flags = ObjectiveFlags::new(
        shape.direction == Some(Direction::Nondecreasing),
        shape.dr_submodular,
        shape.submodular,
    );
    if mflags.identity {
        flags.lipschitz_estimate = fflags.lipschitz_estimate;
        flags.strong_dr = fflags.strong_dr;
    }
    Ok(Composed {
        outer,
        inner,
        flags,
        shape,
    })
}

impl Objective for Composed {
    fn domain(&self) -> &BoxDomain {
        self.inner.input_domain()
    }

    fn flags(&self) -> ObjectiveFlags {
        self.flags
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let (y, _) = self.inner.apply(x)?;
        self.outer.value(&y)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (y, jac) = self.inner.apply(x)?;
        let (value, gy) = self.outer.eval_grad(&y)?;
        Ok((value, jac.transpose_mul(&gy)))
    }

    fn name(&self) -> &str {
        "composed"
    }
}
