use std::time::Instant;

use super::{
    check_feasible, elapsed_ms, gap_from_gradient, prepare, IterationRecord, SolverConfig, SolverKind, StepRule,
    Trajectory,
};
use crate::constraints::Region;
use crate::error::{Error, Result};
use crate::objective::Objective;

/// Projected gradient ascent `x ← Π_P(x + γ ∇f(x))`; outputs the iterate
/// with the largest value. For monotone DR-submodular `f` and `γ = 1/L`,
/// `f(x) ≥ f(x*)/2 − D² L / (2K)`.
pub fn pga(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig, x0: &[f64]) -> Result<Trajectory> {
    let start = Instant::now();
    if !region.supports_projection() {
        return Err(Error::Unsupported("pga needs a constraint with a Euclidean projection".into()));
    }
    let (l, d) = prepare(obj, region, config)?;
    let rule = config.step_for(SolverKind::Pga)?;
    check_feasible(region, x0, "starting point")?;
    let mut traj = Trajectory::new(SolverKind::Pga.name(), l, d).keep_points(config.record_points);
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut last_step = 0.0;
    for k in 0..=config.iterations {
        let (value, g) = obj.eval_grad(&x)?;
        let (gap, _) = gap_from_gradient(region, &x, &g)?;
        traj.push(
            IterationRecord { iter: k, t_cum: t, value, gap, step: last_step, elapsed_ms: elapsed_ms(start) },
            &x,
        );
        if k == config.iterations {
            break;
        }
        let gamma = match rule {
            StepRule::Lipschitz => 1.0 / l,
            StepRule::Adaptive => config.adaptive_c / ((k + 1) as f64).sqrt(),
            _ => unreachable!("rule validated by step_for"),
        };
        let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + gamma * b).collect();
        x = region.project(&y)?;
        t += gamma;
        last_step = gamma;
    }
    traj.final_point = traj.best_point.clone();
    traj.final_value = traj.best_value;
    traj.wall_ms = elapsed_ms(start);
    Ok(traj)
}
