use rand::Rng as _;

use crate::error::Result;
use crate::lattice::{norm, sub};
use crate::objective::Objective;
use crate::rng::{self, streams};

pub const ESTIMATE_PAIRS: usize = 200;
pub const SAFETY_FACTOR: f64 = 2.0;
/// Floor applied so that `1/L` stays finite for (near-)linear objectives.
pub const MIN_LIPSCHITZ: f64 = 1e-12;

/// `2 · max ‖∇f(a) − ∇f(b)‖ / ‖a − b‖` over random pairs in the domain.
///
/// A heuristic lower estimate scaled by a safety factor, not a certified
/// bound.
pub fn estimate_lipschitz(obj: &dyn Objective, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = rng::stream(seed, streams::LIPSCHITZ);
    let upper = obj.domain().upper();
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let a: Vec<f64> = upper.iter().map(|&u| rng.random::<f64>() * u).collect();
        let b: Vec<f64> = upper.iter().map(|&u| rng.random::<f64>() * u).collect();
        let dist = norm(&sub(&a, &b));
        if dist == 0.0 {
            continue;
        }
        let ga = obj.gradient(&a)?;
        let gb = obj.gradient(&b)?;
        best = best.max(norm(&sub(&ga, &gb)) / dist);
    }
    Ok(SAFETY_FACTOR * best)
}

/// The override, else the objective's own estimate, else a sampled estimate.
pub fn resolve_lipschitz(obj: &dyn Objective, override_value: Option<f64>, seed: u64) -> Result<f64> {
    let l = match override_value.or(obj.flags().lipschitz_estimate) {
        Some(l) => l,
        None => estimate_lipschitz(obj, ESTIMATE_PAIRS, seed)?,
    };
    Ok(l.max(MIN_LIPSCHITZ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoxDomain;
    use crate::objectives::quadratic::QuadraticObjective;
    use nalgebra::DMatrix;

    #[test]
    fn sampled_estimate_brackets_quadratic_norm() {
        let h = DMatrix::from_row_slice(2, 2, &[-1.0, -2.0, -2.0, -1.0]);
        let q = QuadraticObjective::new(h, vec![0.0; 2], 0.0, BoxDomain::unit(2)).unwrap();
        let est = estimate_lipschitz(&q, 200, 3).unwrap();
        // True constant is the spectral norm 3.
        assert!((2.0..=2.0 * 3.0 + 1e-9).contains(&est));
    }

    #[test]
    fn override_wins() {
        let q = QuadraticObjective::linear(vec![1.0], BoxDomain::unit(1)).unwrap();
        assert_eq!(resolve_lipschitz(&q, Some(7.0), 0).unwrap(), 7.0);
        assert_eq!(resolve_lipschitz(&q, None, 0).unwrap(), MIN_LIPSCHITZ);
    }
}
