use std::time::Instant;

use super::{
    check_feasible, elapsed_ms, gap_from_gradient, prepare, tidy, IterationRecord, SolverConfig, SolverKind, StepRule,
    Trajectory,
};
use crate::constraints::Region;
use crate::error::Result;
use crate::lattice::{dot, norm, sub};
use crate::objective::Objective;

const GOLDEN_ITERATIONS: usize = 30;

/// Classical Frank-Wolfe `x ← x + γ (v − x)` from a feasible `x0`.
///
/// Stops once the gap `g_k = ⟨v_k − x_k, ∇f(x_k)⟩` is at most `ε` or after
/// `K` updates, and outputs the iterate with the smallest recorded gap. For
/// a monotone DR-submodular objective that point satisfies
/// `f(x) ≥ ½ [f(x*) − g_P(x)]`.
pub fn nonconvex_fw(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig, x0: &[f64]) -> Result<Trajectory> {
    let start = Instant::now();
    let (l, d) = prepare(obj, region, config)?;
    let rule = config.step_for(SolverKind::NonconvexFw)?;
    let mut traj = Trajectory::new(SolverKind::NonconvexFw.name(), l, d).keep_points(config.record_points);
    let phase = Phase { rule, iterations: config.iterations, epsilon: config.epsilon, l, d, start };
    let out = phase.run(obj, region, x0, 0, 0.0, &mut traj)?;
    traj.final_point = out.point;
    traj.final_value = out.value;
    traj.final_gap = Some(out.gap);
    traj.wall_ms = elapsed_ms(start);
    Ok(traj)
}

pub(crate) struct Phase {
    pub rule: StepRule,
    pub iterations: usize,
    pub epsilon: f64,
    pub l: f64,
    pub d: f64,
    pub start: Instant,
}

pub(crate) struct PhaseOutput {
    pub point: Vec<f64>,
    pub value: f64,
    pub gap: f64,
}

impl Phase {
    /// Appends this phase's records to `traj`, numbering from `iter_offset`.
    pub fn run(
        &self,
        obj: &dyn Objective,
        region: &dyn Region,
        x0: &[f64],
        iter_offset: usize,
        t_offset: f64,
        traj: &mut Trajectory,
    ) -> Result<PhaseOutput> {
        check_feasible(region, x0, "starting point")?;
        let upper = region.upper().to_vec();
        let mut x = x0.to_vec();
        let mut t = t_offset;
        let mut last_step = 0.0;
        let mut best: Option<PhaseOutput> = None;
        for k in 0..=self.iterations {
            let (value, g) = obj.eval_grad(&x)?;
            let (gap, v) = gap_from_gradient(region, &x, &g)?;
            traj.push(
                IterationRecord {
                    iter: iter_offset + k,
                    t_cum: t,
                    value,
                    gap,
                    step: last_step,
                    elapsed_ms: elapsed_ms(self.start),
                },
                &x,
            );
            if best.as_ref().is_none_or(|b| gap < b.gap) {
                best = Some(PhaseOutput { point: x.clone(), value, gap });
            }
            if gap <= self.epsilon || k == self.iterations {
                break;
            }
            let dir = sub(&v, &x);
            let gamma = match self.rule {
                StepRule::Oblivious => 2.0 / (k as f64 + 2.0),
                StepRule::Constant => 1.0 / self.iterations as f64,
                StepRule::Curvature => {
                    let c = self.l * self.d * self.d;
                    if c > 0.0 {
                        (gap / c).clamp(0.0, 1.0)
                    } else {
                        1.0
                    }
                }
                StepRule::Lipschitz => {
                    let dd = dot(&dir, &dir);
                    if dd > 0.0 {
                        (gap / (self.l * dd)).clamp(0.0, 1.0)
                    } else {
                        0.0
                    }
                }
                StepRule::LineSearch => golden_section(obj, &x, &dir, value)?,
                StepRule::Adaptive => unreachable!("rule validated by step_for"),
            };
            for (xi, di) in x.iter_mut().zip(&dir) {
                *xi += gamma * di;
            }
            tidy(&mut x, &upper);
            t += gamma;
            last_step = gamma;
        }
        Ok(best.expect("at least one record"))
    }
}

/// Maximizes `γ ↦ f(x + γ d)` on `[0, 1]`; returns the better of the
/// bracketed point and the full step.
fn golden_section(obj: &dyn Objective, x: &[f64], dir: &[f64], f0: f64) -> Result<f64> {
    if norm(dir) == 0.0 {
        return Ok(0.0);
    }
    let phi = |g: f64| -> Result<f64> {
        let y: Vec<f64> = x.iter().zip(dir).map(|(a, b)| (a + g * b).max(0.0)).collect();
        obj.value(&y)
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - ratio * (b - a);
    let mut e = a + ratio * (b - a);
    let (mut fc, mut fe) = (phi(c)?, phi(e)?);
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = phi(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = phi(e)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = phi(mid)?;
    let f1 = phi(1.0)?;
    let (g, fg) = if f1 > fm { (1.0, f1) } else { (mid, fm) };
    Ok(if fg >= f0 { g } else { 0.0 })
}
