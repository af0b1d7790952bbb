//! Maximization algorithms and their trajectories.

mod config;
mod fw;
pub mod lipschitz;
mod nonconvex;
mod pga;
mod trajectory;
mod two_phase;

use std::time::Instant;

pub use config::{SolverConfig, SolverKind, StepRule};
pub use fw::{shrunken_fw, submodular_fw};
pub use nonconvex::nonconvex_fw;
pub use pga::pga;
pub use trajectory::{IterationRecord, Summary, Trajectory, TwoPhaseDetail, CSV_HEADER};
pub use two_phase::two_phase;

use crate::constraints::Region;
use crate::error::{check_dim, Error, Result};
use crate::lattice::{dot, norm, TOL};
use crate::objective::Objective;

/// Feasibility tolerance for iterates.
pub const FEAS_TOL: f64 = 1e-8;

/// `g_Q(x) = max_{v∈Q} ⟨v − x, ∇f(x)⟩`, from one LMO call.
pub fn non_stationarity(obj: &dyn Objective, region: &dyn Region, x: &[f64]) -> Result<f64> {
    let g = obj.gradient(x)?;
    gap_from_gradient(region, x, &g).map(|(gap, _)| gap)
}

/// The gap and the LMO vertex for a known gradient.
pub(crate) fn gap_from_gradient(region: &dyn Region, x: &[f64], g: &[f64]) -> Result<(f64, Vec<f64>)> {
    let v = region.lmo(g, None)?;
    let gap = dot(&v, g) - dot(x, g);
    Ok((gap, v))
}

/// Runs the named solver.
pub fn solve(kind: SolverKind, obj: &dyn Objective, region: &dyn Region, config: &SolverConfig) -> Result<Trajectory> {
    match kind {
        SolverKind::SubmodularFw => submodular_fw(obj, region, config),
        SolverKind::ShrunkenFw => shrunken_fw(obj, region, config),
        SolverKind::NonconvexFw => {
            let x0 = start_point(config.x0.as_deref(), region)?;
            nonconvex_fw(obj, region, config, &x0)
        }
        SolverKind::Pga => {
            let x0 = start_point(config.x0.as_deref(), region)?;
            pga(obj, region, config, &x0)
        }
        SolverKind::TwoPhase => two_phase(obj, region, config),
    }
}

pub(crate) fn start_point(given: Option<&[f64]>, region: &dyn Region) -> Result<Vec<f64>> {
    Ok(match given {
        Some(x) => x.to_vec(),
        None => vec![0.0; region.dim()],
    })
}

/// Common checks; returns `(L, D)`.
pub(crate) fn prepare(obj: &dyn Objective, region: &dyn Region, config: &SolverConfig) -> Result<(f64, f64)> {
    config.validate()?;
    check_dim(obj.dim(), region.dim())?;
    let upper = obj.domain().upper();
    if region.upper().iter().zip(upper).any(|(r, u)| *r > u + TOL) {
        return Err(Error::InvalidParameter("constraint region leaves the objective's domain".into()));
    }
    let l = lipschitz::resolve_lipschitz(obj, config.lipschitz, config.seed)?;
    Ok((l, norm(region.upper())))
}

pub(crate) fn check_feasible(region: &dyn Region, x: &[f64], what: &str) -> Result<()> {
    check_dim(region.dim(), x.len())?;
    if region.contains(x, FEAS_TOL) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} is not feasible")))
    }
}

/// Removes rounding excursions below zero or above the enclosing box.
pub(crate) fn tidy(x: &mut [f64], upper: &[f64]) {
    for (v, &u) in x.iter_mut().zip(upper) {
        *v = v.clamp(0.0, u);
    }
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::BoxConstraint;
    use crate::lattice::BoxDomain;
    use crate::objectives::quadratic::QuadraticObjective;
    use nalgebra::DMatrix;

    #[test]
    fn linear_gap_at_zero() {
        let d = BoxDomain::new(vec![2.0, 3.0, 1.0]).unwrap();
        let f = QuadraticObjective::linear(vec![1.0, -1.0, 0.5], d.clone()).unwrap();
        let gap = non_stationarity(&f, &BoxConstraint::new(d), &[0.0; 3]).unwrap();
        assert!((gap - 2.5).abs() < 1e-15);
    }

    #[test]
    fn interior_maximizer_is_stationary() {
        // −(x − 1)² − (y − 1)² on [0, 4]², maximized at (1, 1).
        let h = DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 0.0, -2.0]);
        let d = BoxDomain::new(vec![4.0, 4.0]).unwrap();
        let f = QuadraticObjective::new(h, vec![2.0, 2.0], 0.0, d.clone()).unwrap();
        let gap = non_stationarity(&f, &BoxConstraint::new(d), &[1.0, 1.0]).unwrap();
        assert!(gap.abs() < 1e-8);
    }

    #[test]
    fn zero_gradient_has_zero_gap() {
        let d = BoxDomain::unit(2);
        let f = QuadraticObjective::linear(vec![0.0, 0.0], d.clone()).unwrap();
        assert_eq!(non_stationarity(&f, &BoxConstraint::new(d), &[0.3, 0.9]).unwrap(), 0.0);
    }
}
