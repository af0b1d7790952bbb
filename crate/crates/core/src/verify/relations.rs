use super::{sample_feasible, uniform_between, CheckOptions, CheckReport};
use crate::constraints::{Region, Shrunken};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{dot, join, meet, norm, sub};
use crate::objective::Objective;
use crate::rng::{self, streams};
use crate::solvers::{non_stationarity, FEAS_TOL};

/// Local-global relation at solver outputs.
///
/// Without `z`: `f(x) ≥ ½ [OPT − g_P(x)] + (μ/4) ‖x − x*‖²`, with `μ` from
/// the objective's certified strong-DR modulus (`0` if absent or if `x*` is
/// not given). With `z ∈ Q = P ∩ {y ≤ ū − x}`:
/// `max{f(x), f(z)} ≥ ¼ [OPT − g_P(x) − g_Q(z)]`.
pub fn check_local_global(
    obj: &dyn Objective,
    region: &dyn Region,
    x: &[f64],
    z: Option<&[f64]>,
    opt_value: f64,
    opt_point: Option<&[f64]>,
    tolerance: f64,
) -> Result<CheckReport> {
    if !region.contains(x, FEAS_TOL) {
        return Err(Error::InvalidParameter("x is not feasible".into()));
    }
    let gap_x = non_stationarity(obj, region, x)?;
    let fx = obj.value(x)?;
    match z {
        None => {
            let mut report = CheckReport::new("local_global_monotone", tolerance);
            let mu = obj.flags().strong_dr.unwrap_or(0.0);
            let strong = match opt_point {
                Some(p) => {
                    check_dim(x.len(), p.len())?;
                    0.25 * mu * norm(&sub(x, p)).powi(2)
                }
                None => 0.0,
            };
            let margin = fx - (0.5 * (opt_value - gap_x) + strong);
            report.record(margin, || vec![x.to_vec()]);
            Ok(report)
        }
        Some(z) => {
            let mut report = CheckReport::new("local_global_two_point", tolerance);
            let q = Shrunken::complement_of(region, obj.domain().upper(), x)?;
            if !q.contains(z, FEAS_TOL) {
                return Err(Error::InvalidParameter("z is not feasible in P ∩ {y ≤ ū − x}".into()));
            }
            let gap_z = non_stationarity(obj, &q, z)?;
            let fz = obj.value(z)?;
            let margin = fx.max(fz) - 0.25 * (opt_value - gap_x - gap_z);
            report.record(margin, || vec![x.to_vec(), z.to_vec()]);
            Ok(report)
        }
    }
}

/// `(y − x)ᵀ ∇f(x) ≥ f(x ∨ y) + f(x ∧ y) − 2 f(x) + (μ/2) ‖x − y‖²` at random
/// pairs of the domain.
pub fn check_join_meet_inequality(obj: &dyn Objective, mu: f64, opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("join_meet_gradient", opts.tolerance);
    let upper = obj.domain().upper();
    let zero = vec![0.0; upper.len()];
    for _ in 0..opts.samples {
        let x = uniform_between(&mut rng, &zero, upper);
        let y = uniform_between(&mut rng, &zero, upper);
        let (fx, g) = obj.eval_grad(&x)?;
        let d = sub(&y, &x);
        let rhs = obj.value(&join(&x, &y)?)? + obj.value(&meet(&x, &y)?)? - 2.0 * fx + 0.5 * mu * dot(&d, &d);
        report.record(dot(&d, &g) - rhs, || vec![x.clone(), y.clone()]);
    }
    Ok(report)
}

/// For random feasible `x`, random `z ∈ P ∩ {y ≤ ū − x}` and
/// `z* = x ∨ x* − x`:
/// `f(x ∨ x*) + f(x ∧ x*) + f(z ∨ z*) + f(z ∧ z*) ≥ f(x*)`.
pub fn check_key_claim(
    obj: &dyn Objective,
    region: &dyn Region,
    opt_point: &[f64],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    check_dim(region.dim(), opt_point.len())?;
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("key_claim", opts.tolerance);
    let f_opt = obj.value(opt_point)?;
    let upper = obj.domain().upper();
    for _ in 0..opts.samples {
        let x = sample_feasible(region, &mut rng);
        let q = Shrunken::complement_of(region, upper, &x)?;
        let z = sample_feasible(&q, &mut rng);
        let x_join = join(&x, opt_point)?;
        let z_star: Vec<f64> = x_join.iter().zip(&x).map(|(a, b)| (a - b).max(0.0)).collect();
        let lhs = obj.value(&x_join)?
            + obj.value(&meet(&x, opt_point)?)?
            + obj.value(&join(&z, &z_star)?)?
            + obj.value(&meet(&z, &z_star)?)?;
        report.record(lhs - f_opt, || vec![x.clone(), z.clone()]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::BoxConstraint;
    use crate::lattice::BoxDomain;
    use crate::objectives::quadratic::QuadraticObjective;
    use nalgebra::DMatrix;

    fn dr_quadratic() -> QuadraticObjective {
        let h = DMatrix::from_row_slice(2, 2, &[-1.0, -0.5, -0.5, -0.8]);
        QuadraticObjective::new(h, vec![1.0, 0.9], 0.0, BoxDomain::unit(2)).unwrap()
    }

    #[test]
    fn optimum_satisfies_monotone_relation() {
        let f = dr_quadratic();
        let c = BoxConstraint::new(BoxDomain::unit(2));
        let x = [1.0, 1.0];
        let opt = f.value(&x).unwrap();
        let r = check_local_global(&f, &c, &x, None, opt, Some(&x), 1e-9).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn join_meet_inequality_on_dr_quadratic() {
        let r = check_join_meet_inequality(&dr_quadratic(), 0.0, &CheckOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.worst_margin);
    }

    #[test]
    fn key_claim_with_any_reference_point() {
        let f = dr_quadratic();
        let c = BoxConstraint::new(BoxDomain::unit(2));
        let r = check_key_claim(&f, &c, &[0.6, 0.3], &CheckOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.worst_margin);
    }

    #[test]
    fn infeasible_z_rejected() {
        let f = dr_quadratic();
        let c = BoxConstraint::new(BoxDomain::unit(2));
        assert!(check_local_global(&f, &c, &[0.8, 0.0], Some(&[0.5, 0.0]), 1.0, None, 1e-7).is_err());
    }
}
