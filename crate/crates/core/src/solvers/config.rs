use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `2 / (k + 2)`.
    Oblivious,
    /// `1 / K`.
    Constant,
    /// `1 / L` for gradient ascent; `min(1, g_k / (L ‖d_k‖²))` for
    /// Frank-Wolfe.
    Lipschitz,
    /// `C / √(k + 1)`.
    Adaptive,
    /// Golden-section search over `γ ∈ [0, 1]`.
    LineSearch,
    /// `min(g_k / C, 1)` with `C = L D²`.
    Curvature,
}

/// The available algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    SubmodularFw,
    ShrunkenFw,
    NonconvexFw,
    Pga,
    TwoPhase,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::SubmodularFw,
        SolverKind::ShrunkenFw,
        SolverKind::NonconvexFw,
        SolverKind::Pga,
        SolverKind::TwoPhase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::SubmodularFw => "submodular_fw",
            SolverKind::ShrunkenFw => "shrunken_fw",
            SolverKind::NonconvexFw => "nonconvex_fw",
            SolverKind::Pga => "pga",
            SolverKind::TwoPhase => "two_phase",
        }
    }

    /// Step rules each solver accepts; the first is the default.
    pub fn step_rules(self) -> &'static [StepRule] {
        use StepRule::*;
        match self {
            SolverKind::SubmodularFw | SolverKind::ShrunkenFw => &[Constant, Oblivious],
            SolverKind::NonconvexFw | SolverKind::TwoPhase => &[Oblivious, LineSearch, Curvature, Lipschitz],
            SolverKind::Pga => &[Lipschitz, Adaptive],
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown solver `{s}`")))
    }
}

/// Parameters shared by all solvers. Fields a solver does not use are
/// ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// `K`.
    pub iterations: usize,
    /// `K₁` for the first phase of `two_phase`; defaults to `K`.
    pub phase1_iterations: Option<usize>,
    /// `K₂` for the second phase of `two_phase`; defaults to `K`.
    pub phase2_iterations: Option<usize>,
    /// `None` selects the solver's default rule.
    pub step: Option<StepRule>,
    /// Multiplicative LMO accuracy `α ∈ (0, 1]`.
    pub alpha: f64,
    /// Additive LMO error level `δ ≥ 0`.
    pub delta: f64,
    /// Stopping tolerance on the non-stationarity gap.
    pub epsilon: f64,
    pub epsilon1: Option<f64>,
    pub epsilon2: Option<f64>,
    /// Constant `C` of the adaptive rule `C/√(k+1)`.
    pub adaptive_c: f64,
    /// Overrides the gradient Lipschitz constant.
    pub lipschitz: Option<f64>,
    pub seed: u64,
    /// Run even when the objective's flags void the guarantee.
    pub force: bool,
    /// Starting point for `nonconvex_fw`, `pga` and the first phase of
    /// `two_phase`; defaults to `0`.
    pub x0: Option<Vec<f64>>,
    /// Starting point of the second phase of `two_phase`; defaults to `0`.
    pub z0: Option<Vec<f64>>,
    /// Keep every iterate in the trajectory.
    pub record_points: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            iterations: 100,
            phase1_iterations: None,
            phase2_iterations: None,
            step: None,
            alpha: 1.0,
            delta: 0.0,
            epsilon: 1e-8,
            epsilon1: None,
            epsilon2: None,
            adaptive_c: 100.0,
            lipschitz: None,
            seed: 0,
            force: false,
            x0: None,
            z0: None,
            record_points: false,
        }
    }
}

impl SolverConfig {
    pub fn with_iterations(iterations: usize) -> Self {
        SolverConfig {
            iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.iterations == 0 || self.phase1_iterations == Some(0) || self.phase2_iterations == Some(0) {
            return bad("iterations must be >= 1");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return bad("delta must be finite and >= 0");
        }
        for e in [Some(self.epsilon), self.epsilon1, self.epsilon2].into_iter().flatten() {
            if !(e >= 0.0) {
                return bad("stopping tolerances must be >= 0");
            }
        }
        if !(self.adaptive_c > 0.0) || !self.adaptive_c.is_finite() {
            return bad("adaptive_c must be finite and > 0");
        }
        if let Some(l) = self.lipschitz {
            if !(l > 0.0) || !l.is_finite() {
                return bad("lipschitz must be finite and > 0");
            }
        }
        Ok(())
    }

    /// The configured rule, or the solver's default; errors when the rule
    /// does not apply to the solver.
    pub fn step_for(&self, kind: SolverKind) -> Result<StepRule> {
        let allowed = kind.step_rules();
        match self.step {
            None => Ok(allowed[0]),
            Some(rule) if allowed.contains(&rule) => Ok(rule),
            Some(rule) => Err(Error::InvalidParameter(format!("step rule {rule:?} does not apply to {kind}"))),
        }
    }
}
