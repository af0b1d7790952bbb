use serde::{Deserialize, Serialize};

use crate::constraints::Region;
use crate::error::{check_dim, Error, Result};
use crate::objective::{Objective, SetFunction};
use crate::solvers::lipschitz::resolve_lipschitz;

/// Step for central-difference gradients.
pub const FD_STEP: f64 = 1e-5;
/// Step for second-order differences.
pub const FD_STEP_SECOND: f64 = 1e-4;

const MAX_MULTILINEAR_DIM: usize = 20;
const MAX_GRID_DIM: usize = 4;
const MAX_GRID_POINTS: usize = 50_000_000;

fn check_interior(obj: &dyn Objective, x: &[f64], h: f64) -> Result<()> {
    check_dim(obj.dim(), x.len())?;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("difference step must be > 0".into()));
    }
    for (i, (&v, &u)) in x.iter().zip(obj.domain().upper()).enumerate() {
        if v - h < 0.0 || v + h > u {
            return Err(Error::InvalidParameter(format!(
                "coordinate {i} = {v} is within {h} of the domain boundary"
            )));
        }
    }
    Ok(())
}

/// `(f(x + h eᵢ) − f(x − h eᵢ)) / 2h`.
pub fn fd_gradient(obj: &dyn Objective, x: &[f64], h: f64) -> Result<Vec<f64>> {
    check_interior(obj, x, h)?;
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let plus = obj.value(&y)?;
            y[i] = x[i] - h;
            let minus = obj.value(&y)?;
            y[i] = x[i];
            Ok((plus - minus) / (2.0 * h))
        })
        .collect()
}

/// Hessian by central differences of the analytic gradient, symmetrized.
pub fn fd_hessian(obj: &dyn Objective, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    check_interior(obj, x, h)?;
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut y = x.to_vec();
    for j in 0..n {
        y[j] = x[j] + h;
        let gp = obj.gradient(&y)?;
        y[j] = x[j] - h;
        let gm = obj.gradient(&y)?;
        y[j] = x[j];
        cols.push(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>());
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| 0.5 * (cols[j][i] + cols[i][j])).collect())
        .collect())
}

/// `Σ_S F(S) Π_{i∈S} x_i Π_{j∉S} (1 − x_j)` by enumerating all `2ⁿ` sets.
pub fn brute_force_multilinear(f: &dyn SetFunction, x: &[f64]) -> Result<f64> {
    let n = f.ground_size();
    check_dim(n, x.len())?;
    if n > MAX_MULTILINEAR_DIM {
        return Err(Error::TooLarge(format!("{n} items exceed the limit of {MAX_MULTILINEAR_DIM}")));
    }
    let mut mask = vec![false; n];
    let mut total = 0.0;
    for bits in 0u32..(1u32 << n) {
        let mut weight = 1.0;
        for (i, m) in mask.iter_mut().enumerate() {
            *m = bits >> i & 1 == 1;
            weight *= if *m { x[i] } else { 1.0 - x[i] };
        }
        if weight != 0.0 {
            total += weight * f.eval_set(&mask)?;
        }
    }
    Ok(total)
}

/// Best feasible grid point and a bound on how far the true maximum can
/// exceed it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMax {
    pub point: Vec<f64>,
    pub value: f64,
    /// `max f − value ≤ slack` over the region.
    pub slack: f64,
    pub points_evaluated: usize,
}

/// Exhaustive search over `{0, r, 2r, …} ∪ {upper_i}` per coordinate.
///
/// Every maximizer `x*` has a feasible grid point `y ≤ x*` within `r` per
/// coordinate (the region is down-closed), so
/// `f(x*) − f(y) ≤ r Σᵢ max(0, ∂ᵢf(y)) + L n r² / 2`; the curvature term is
/// dropped for DR-submodular objectives, which are concave along `x* − y ≥ 0`.
pub fn brute_force_grid_max(obj: &dyn Objective, region: &dyn Region, resolution: f64) -> Result<GridMax> {
    let n = region.dim();
    check_dim(obj.dim(), n)?;
    if n > MAX_GRID_DIM {
        return Err(Error::TooLarge(format!("grid search supports n <= {MAX_GRID_DIM}, got {n}")));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidParameter("resolution must be > 0".into()));
    }
    let axes: Vec<Vec<f64>> = region
        .upper()
        .iter()
        .map(|&u| {
            let mut axis: Vec<f64> = (0..)
                .map(|k| k as f64 * resolution)
                .take_while(|&v| v < u - 1e-12 * u.max(1.0))
                .collect();
            axis.push(u);
            axis
        })
        .collect();
    let total = axes.iter().map(Vec::len).try_fold(1usize, |a, l| a.checked_mul(l));
    if total.is_none_or(|t| t > MAX_GRID_POINTS) {
        return Err(Error::TooLarge("grid has too many points".into()));
    }
    let mut idx = vec![0usize; n];
    let mut x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut best = GridMax { point: x.clone(), value: f64::NEG_INFINITY, slack: 0.0, points_evaluated: 0 };
    let mut ascent: f64 = 0.0;
    'outer: loop {
        if region.contains(&x, 1e-12) {
            let (value, grad) = obj.eval_grad(&x)?;
            best.points_evaluated += 1;
            if value > best.value {
                best.value = value;
                best.point.copy_from_slice(&x);
            }
            ascent = ascent.max(grad.iter().map(|g| g.max(0.0)).sum());
        }
        for d in 0..n {
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                x[d] = axes[d][idx[d]];
                continue 'outer;
            }
            idx[d] = 0;
            x[d] = axes[d][0];
        }
        break;
    }
    let mut slack = resolution * ascent;
    if !obj.flags().dr_submodular {
        let l = resolve_lipschitz(obj, None, 0)?;
        slack += 0.5 * l * n as f64 * resolution * resolution;
    }
    best.slack = slack;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::BoxConstraint;
    use crate::lattice::BoxDomain;
    use crate::objectives::quadratic::QuadraticObjective;
    use nalgebra::DMatrix;

    #[test]
    fn fd_of_linear_is_exact() {
        let f = QuadraticObjective::linear(vec![1.0, -2.0], BoxDomain::unit(2)).unwrap();
        let g = fd_gradient(&f, &[0.5, 0.5], FD_STEP).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-9 && (g[1] + 2.0).abs() < 1e-9);
        assert!(fd_gradient(&f, &[0.0, 0.5], FD_STEP).is_err());
    }

    #[test]
    fn multilinear_binary_and_modular() {
        let w = [1.0, 2.0, 4.0];
        let f = (3usize, move |s: &[bool]| s.iter().zip(&w).filter(|(&m, _)| m).map(|(_, v)| v).sum::<f64>());
        assert_eq!(brute_force_multilinear(&f, &[1.0, 0.0, 1.0]).unwrap(), 5.0);
        let v = brute_force_multilinear(&f, &[0.1, 0.2, 0.3]).unwrap();
        assert!((v - (0.1 + 0.4 + 1.2)).abs() < 1e-12);
        let big = (21usize, |_: &[bool]| 0.0);
        assert!(matches!(brute_force_multilinear(&big, &[0.5; 21]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn grid_finds_linear_corner() {
        let d = BoxDomain::new(vec![1.0, 0.75]).unwrap();
        let f = QuadraticObjective::linear(vec![1.0, 2.0], d.clone()).unwrap();
        let g = brute_force_grid_max(&f, &BoxConstraint::new(d), 0.1).unwrap();
        assert_eq!(g.point, vec![1.0, 0.75]);
        assert!((g.value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn grid_on_intro_quadratic() {
        let h = DMatrix::from_row_slice(2, 2, &[-1.0, -2.0, -2.0, -1.0]);
        let d = BoxDomain::unit(2);
        let f = QuadraticObjective::new(h, vec![1.0, 1.0], 0.0, d.clone()).unwrap();
        let g = brute_force_grid_max(&f, &BoxConstraint::new(d), 0.01).unwrap();
        // Maximum 1/2 at the corners (1, 0) and (0, 1).
        assert!((g.value - 0.5).abs() <= g.slack + 1e-12);
        assert!(g.value <= 0.5 + 1e-12);
    }
}
