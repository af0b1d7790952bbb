use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::oracles::{fd_hessian, FD_STEP_SECOND};
use super::{uniform_between, CheckOptions, CheckReport};
use crate::error::Result;
use crate::objective::Objective;
use crate::rng::{self, streams, Rng};

fn with_coord(x: &[f64], i: usize, v: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[i] = v;
    y
}

/// `a ≤ b` uniform in the domain.
fn ordered_pair(rng: &mut Rng, upper: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let zero = vec![0.0; upper.len()];
    let a = uniform_between(rng, &zero, upper);
    let b = uniform_between(rng, &a, upper);
    (a, b)
}

/// Diminishing returns `f(k eᵢ + a) − f(a) ≥ f(k eᵢ + b) − f(b)` for `a ≤ b`;
/// with `shared_coordinate` the pair agrees in coordinate `i`.
fn diminishing_returns(
    obj: &dyn Objective,
    rng: &mut Rng,
    shared_coordinate: bool,
    report: &mut CheckReport,
) -> Result<()> {
    let upper = obj.domain().upper();
    let (a, mut b) = ordered_pair(rng, upper);
    let i = rng.random_range(0..upper.len());
    if shared_coordinate {
        b[i] = a[i];
    }
    let k = rng.random::<f64>() * (upper[i] - b[i]);
    let a_k = with_coord(&a, i, a[i] + k);
    let b_k = with_coord(&b, i, b[i] + k);
    let margin = (obj.value(&a_k)? - obj.value(&a)?) - (obj.value(&b_k)? - obj.value(&b)?);
    report.record(margin, || vec![a.clone(), b.clone(), vec![i as f64, k]]);
    Ok(())
}

/// Weak DR (equivalently, submodularity): diminishing returns along
/// coordinates where the two base points agree.
pub fn check_weak_dr(obj: &dyn Objective, opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("weak_dr", opts.tolerance);
    for _ in 0..opts.samples {
        diminishing_returns(obj, &mut rng, true, &mut report)?;
    }
    Ok(report)
}

/// DR: diminishing returns for every `a ≤ b` and every coordinate, plus
/// coordinate-wise concavity `f(k eᵢ + x) − f(x) ≥ f((k+l) eᵢ + x) − f(l eᵢ + x)`.
pub fn check_dr(obj: &dyn Objective, opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("dr", opts.tolerance);
    let upper = obj.domain().upper();
    let zero = vec![0.0; upper.len()];
    for _ in 0..opts.samples {
        diminishing_returns(obj, &mut rng, false, &mut report)?;

        let x = uniform_between(&mut rng, &zero, upper);
        let i = rng.random_range(0..upper.len());
        let room = upper[i] - x[i];
        let k = rng.random::<f64>() * room;
        let l = rng.random::<f64>() * (room - k);
        let f = |t: f64| obj.value(&with_coord(&x, i, x[i] + t));
        let margin = (f(k)? - f(0.0)?) - (f(k + l)? - f(l)?);
        report.record(margin, || vec![x.clone(), vec![i as f64, k, l]]);
    }
    Ok(report)
}

/// Antitone gradient: `∇f(a) ≥ ∇f(b)` for `a ≤ b`. In weak mode only the
/// coordinates where `a` and `b` agree are compared.
pub fn check_antitone(obj: &dyn Objective, opts: &CheckOptions, weak: bool) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let name = if weak { "weak_antitone" } else { "antitone" };
    let mut report = CheckReport::new(name, opts.tolerance);
    let upper = obj.domain().upper();
    for _ in 0..opts.samples {
        let (a, mut b) = ordered_pair(&mut rng, upper);
        let mut shared = vec![!weak; a.len()];
        if weak {
            for (i, s) in shared.iter_mut().enumerate() {
                if rng.random::<bool>() {
                    *s = true;
                    b[i] = a[i];
                }
            }
        }
        let ga = obj.gradient(&a)?;
        let gb = obj.gradient(&b)?;
        let margin = (0..a.len())
            .filter(|&i| shared[i])
            .map(|i| ga[i] - gb[i])
            .fold(f64::INFINITY, f64::min);
        if margin.is_finite() {
            report.record(margin, || vec![a.clone(), b.clone()]);
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HessianMode {
    /// `∂²f/∂xᵢ∂xⱼ ≤ 0` for `i ≠ j` (submodularity).
    OffDiagonal,
    /// Every entry `≤ 0` (DR-submodularity).
    All,
}

/// Finite-difference Hessian signs at random interior points.
pub fn check_cross_partials(obj: &dyn Objective, opts: &CheckOptions, mode: HessianMode) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let name = match mode {
        HessianMode::OffDiagonal => "cross_partials",
        HessianMode::All => "hessian_nonpositive",
    };
    let mut report = CheckReport::new(name, opts.tolerance);
    let h = FD_STEP_SECOND;
    let upper = obj.domain().upper();
    let lo: Vec<f64> = upper.iter().map(|&u| (2.0 * h).min(0.5 * u)).collect();
    let hi: Vec<f64> = upper.iter().zip(&lo).map(|(&u, &l)| u - l).collect();
    for _ in 0..opts.samples {
        let x = uniform_between(&mut rng, &lo, &hi);
        let hess = fd_hessian(obj, &x, h)?;
        let mut worst = f64::INFINITY;
        let mut at = (0, 0);
        for (i, row) in hess.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if (i != j || mode == HessianMode::All) && -v < worst {
                    worst = -v;
                    at = (i, j);
                }
            }
        }
        if worst.is_finite() {
            report.record(worst, || vec![x.clone(), vec![at.0 as f64, at.1 as f64]]);
        }
    }
    Ok(report)
}

/// Concavity along nonnegative and nonpositive directions:
/// `f(x + λv) ≥ λ f(x + v) + (1 − λ) f(x)`.
pub fn check_directional_concavity(obj: &dyn Objective, opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("directional_concavity", opts.tolerance);
    let upper = obj.domain().upper();
    for s in 0..opts.samples {
        let (a, b) = ordered_pair(&mut rng, upper);
        // Alternate the sign of v = end − start.
        let (start, end) = if s % 2 == 0 { (a, b) } else { (b, a) };
        let lambda = rng.random::<f64>();
        let mid: Vec<f64> = start.iter().zip(&end).map(|(x, y)| x + lambda * (y - x)).collect();
        let margin = obj.value(&mid)? - (lambda * obj.value(&end)? + (1.0 - lambda) * obj.value(&start)?);
        report.record(margin, || vec![start.clone(), end.clone(), vec![lambda]]);
    }
    Ok(report)
}

/// `f(a) ≤ f(b)` for `a ≤ b`.
pub fn check_monotone(obj: &dyn Objective, opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = rng::stream(opts.seed, streams::CHECKS);
    let mut report = CheckReport::new("monotone", opts.tolerance);
    let upper = obj.domain().upper();
    for _ in 0..opts.samples {
        let (a, b) = ordered_pair(&mut rng, upper);
        let margin = obj.value(&b)? - obj.value(&a)?;
        report.record(margin, || vec![a.clone(), b.clone()]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoxDomain;
    use crate::objectives::bumps::TwoBumps;
    use crate::objectives::quadratic::QuadraticObjective;
    use nalgebra::DMatrix;

    fn quad(entries: [f64; 4]) -> QuadraticObjective {
        QuadraticObjective::new(DMatrix::from_row_slice(2, 2, &entries), vec![0.0; 2], 0.0, BoxDomain::unit(2))
            .unwrap()
    }

    fn opts() -> CheckOptions {
        CheckOptions { samples: 300, ..CheckOptions::default() }
    }

    #[test]
    fn intro_quadratic_is_dr() {
        let f = quad([-1.0, -2.0, -2.0, -1.0]);
        assert!(check_dr(&f, &opts()).unwrap().pass);
        assert!(check_weak_dr(&f, &opts()).unwrap().pass);
        assert!(check_antitone(&f, &opts(), false).unwrap().pass);
        assert!(check_directional_concavity(&f, &opts()).unwrap().pass);
        assert!(check_cross_partials(&f, &opts(), HessianMode::All).unwrap().pass);
    }

    #[test]
    fn positive_interaction_is_caught() {
        let f = quad([0.0, 1.0, 1.0, 0.0]);
        let r = check_weak_dr(&f, &opts()).unwrap();
        assert!(!r.pass && r.witness().is_some());
        assert!(!check_antitone(&f, &opts(), false).unwrap().pass);
        assert!(!check_cross_partials(&f, &opts(), HessianMode::OffDiagonal).unwrap().pass);
    }

    #[test]
    fn bumps_are_submodular_not_dr() {
        let f = TwoBumps::new();
        assert!(check_weak_dr(&f, &opts()).unwrap().pass);
        assert!(check_antitone(&f, &opts(), true).unwrap().pass);
        assert!(check_cross_partials(&f, &opts(), HessianMode::OffDiagonal).unwrap().pass);
        assert!(!check_dr(&f, &opts()).unwrap().pass);
    }

    #[test]
    fn negative_norm_squared_is_antitone() {
        let f = quad([-2.0, 0.0, 0.0, -2.0]);
        assert!(check_antitone(&f, &opts(), false).unwrap().pass);
    }

    #[test]
    fn linear_is_directionally_flat() {
        let f = QuadraticObjective::linear(vec![1.0, -3.0], BoxDomain::unit(2)).unwrap();
        let r = check_directional_concavity(&f, &opts()).unwrap();
        assert!(r.pass && r.worst_margin.abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = quad([-1.0, -2.0, -2.0, -1.0]);
        assert_eq!(check_dr(&f, &opts()).unwrap(), check_dr(&f, &opts()).unwrap());
    }
}
