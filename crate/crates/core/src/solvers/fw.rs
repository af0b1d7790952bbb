//! Frank-Wolfe variants that accumulate `x ← x + γ v` from `x = 0` while the
//! step budget `t < 1`.

use std::time::Instant;

use super::{elapsed_ms, gap_from_gradient, prepare, tidy, IterationRecord, SolverConfig, SolverKind, StepRule, Trajectory};
use crate::constraints::Region;
use crate::error::{Error, Result};
use crate::lattice::dot;
use crate::objective::Objective;

/// Steps closer than this to the remaining budget are merged into a final
/// clamping step, so the steps sum to exactly one.
const BUDGET_SLACK: f64 = 1e-12;

/// Monotone DR-submodular maximization. With `α = 1, δ = 0` and `γ = 1/K`
/// the output satisfies `f(x) ≥ (1 − 1/e) f(x*) − L D² / (2K) + f(0)/e`.
///
/// Refuses objectives not flagged monotone and DR-submodular unless
/// `config.force` is set.
pub fn submodular_fw(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig) -> Result<Trajectory> {
    let flags = obj.flags();
    if !(flags.monotone && flags.dr_submodular) && !config.force {
        return Err(Error::NotApplicable(
            "submodular_fw requires a monotone DR-submodular objective".into(),
        ));
    }
    run(obj, region, config, SolverKind::SubmodularFw)
}

/// Non-monotone DR-submodular maximization with the LMO restricted to
/// `v ≤ ū − x`. With `γ = 1/K` the output satisfies
/// `f(x) ≥ f(x*)/e − L D² / (2K)`, and every iterate obeys
/// `x_i ≤ ū_i [1 − (1 − γ)^{t/γ}]`.
pub fn shrunken_fw(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig) -> Result<Trajectory> {
    if !obj.flags().dr_submodular && !config.force {
        return Err(Error::NotApplicable("shrunken_fw requires a DR-submodular objective".into()));
    }
    run(obj, region, config, SolverKind::ShrunkenFw)
}

fn run(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig, kind: SolverKind) -> Result<Trajectory> {
    let start = Instant::now();
    let (l, d) = prepare(obj, region, config)?;
    let rule = config.step_for(kind)?;
    let shrunken = kind == SolverKind::ShrunkenFw;
    let upper = obj.domain().upper();
    let mut traj = Trajectory::new(kind.name(), l, d).keep_points(config.record_points);
    let n = region.dim();
    let mut x = vec![0.0; n];
    let mut t = 0.0;
    let mut last_step = 0.0;
    let mut k = 0usize;
    loop {
        let (value, g) = obj.eval_grad(&x)?;
        let (gap, v_full) = gap_from_gradient(region, &x, &g)?;
        traj.push(
            IterationRecord { iter: k, t_cum: t, value, gap, step: last_step, elapsed_ms: elapsed_ms(start) },
            &x,
        );
        if t >= 1.0 {
            traj.final_value = value;
            break;
        }
        let mut gamma = match rule {
            StepRule::Constant => 1.0 / config.iterations as f64,
            StepRule::Oblivious => 2.0 / (k as f64 + 2.0),
            _ => unreachable!("rule validated by step_for"),
        }
        .min(1.0 - t);
        if 1.0 - (t + gamma) < BUDGET_SLACK {
            gamma = 1.0 - t;
        }
        let v_exact = if shrunken {
            let cap: Vec<f64> = upper.iter().zip(&x).map(|(u, xi)| (u - xi).max(0.0)).collect();
            region.lmo(&g, Some(&cap))?
        } else {
            v_full
        };
        let v = perturb(v_exact, &g, gamma, config, l, d);
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += gamma * vi;
        }
        tidy(&mut x, upper);
        t += gamma;
        last_step = gamma;
        k += 1;
    }
    traj.final_point = x;
    traj.wall_ms = elapsed_ms(start);
    Ok(traj)
}

/// Scales the exact LMO output so that
/// `⟨v, g⟩ = α max⟨v', g⟩ − ½ δ γ L D²` (never below zero).
fn perturb(v: Vec<f64>, g: &[f64], gamma: f64, config: &SolverConfig, l: f64, d: f64) -> Vec<f64> {
    if config.alpha == 1.0 && config.delta == 0.0 {
        return v;
    }
    let m = dot(&v, g);
    if m <= 0.0 {
        return v;
    }
    let s = (config.alpha - config.delta * gamma * l * d * d / (2.0 * m)).clamp(0.0, 1.0);
    v.into_iter().map(|vi| s * vi).collect()
}
