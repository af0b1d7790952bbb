use std::time::Instant;

use super::nonconvex::Phase;
use super::{elapsed_ms, prepare, start_point, SolverConfig, SolverKind, Trajectory, TwoPhaseDetail};
use crate::constraints::{Region, Shrunken};
use crate::error::{Error, Result};
use crate::lattice::norm;
use crate::objective::Objective;

/// Non-monotone DR-submodular maximization: Frank-Wolfe on `P` gives `x`,
/// Frank-Wolfe on `Q = P ∩ {y ≤ ū − x}` gives `z`, and the better of the
/// two is returned. Always
/// `max{f(x), f(z)} ≥ ¼ [f(x*) − g_P(x) − g_Q(z)]`.
pub fn two_phase(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig) -> Result<Trajectory> {
    let start = Instant::now();
    if !obj.flags().dr_submodular && !config.force {
        return Err(Error::NotApplicable("two_phase requires a DR-submodular objective".into()));
    }
    let (l, d) = prepare(obj, region, config)?;
    let rule = config.step_for(SolverKind::TwoPhase)?;
    let mut traj = Trajectory::new(SolverKind::TwoPhase.name(), l, d).keep_points(config.record_points);

    let phase1 = Phase {
        rule,
        iterations: config.phase1_iterations.unwrap_or(config.iterations),
        epsilon: config.epsilon1.unwrap_or(config.epsilon),
        l,
        d,
        start,
    };
    let x0 = start_point(config.x0.as_deref(), region)?;
    let first = phase1.run(obj, region, &x0, 0, 0.0, &mut traj)?;
    let phase1_records = traj.records.len();

    let q = Shrunken::complement_of(region, obj.domain().upper(), &first.point)?;
    let phase2 = Phase {
        rule,
        iterations: config.phase2_iterations.unwrap_or(config.iterations),
        epsilon: config.epsilon2.unwrap_or(config.epsilon),
        l,
        d: norm(q.upper()),
        start,
    };
    let z0 = start_point(config.z0.as_deref(), &q)?;
    let (offset, t_offset) = traj.records.last().map_or((0, 0.0), |r| (r.iter + 1, r.t_cum));
    let second = phase2.run(obj, &q, &z0, offset, t_offset, &mut traj)?;

    let (point, value, gap) = if first.value >= second.value {
        (first.point.clone(), first.value, first.gap)
    } else {
        (second.point.clone(), second.value, second.gap)
    };
    traj.final_point = point;
    traj.final_value = value;
    traj.final_gap = Some(gap);
    traj.two_phase = Some(TwoPhaseDetail {
        x: first.point,
        value_x: first.value,
        gap_x: first.gap,
        z: second.point,
        value_z: second.value,
        gap_z: second.gap,
        phase1_records,
    });
    traj.wall_ms = elapsed_ms(start);
    Ok(traj)
}
