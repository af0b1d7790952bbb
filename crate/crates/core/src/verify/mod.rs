//! Sampled property checks and exhaustive oracles.

mod checks;
mod oracles;
mod relations;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

pub use checks::{
    check_antitone, check_cross_partials, check_directional_concavity, check_dr, check_monotone, check_weak_dr,
    HessianMode,
};
pub use oracles::{brute_force_grid_max, brute_force_multilinear, fd_gradient, fd_hessian, GridMax, FD_STEP, FD_STEP_SECOND};
pub use relations::{check_join_meet_inequality, check_key_claim, check_local_global};

use crate::constraints::Region;
use crate::rng;

pub const DEFAULT_SAMPLES: usize = 1_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Witnesses kept per report; further violations are only counted.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            samples: DEFAULT_SAMPLES,
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
        }
    }
}

/// A failed inequality: the points involved and `lhs − rhs` (negative).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub points: Vec<Vec<f64>>,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub samples: usize,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub pass: bool,
    pub tolerance: f64,
    /// Smallest `lhs − rhs` seen, reported even on success.
    pub worst_margin: f64,
}

impl CheckReport {
    pub(crate) fn new(property: &str, tolerance: f64) -> Self {
        CheckReport {
            property: property.to_string(),
            samples: 0,
            violations: Vec::new(),
            violation_count: 0,
            pass: true,
            tolerance,
            worst_margin: f64::INFINITY,
        }
    }

    /// Records one tested inequality `lhs − rhs = margin ≥ −tol`.
    pub(crate) fn record(&mut self, margin: f64, points: impl FnOnce() -> Vec<Vec<f64>>) {
        self.samples += 1;
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
        }
        if !(margin >= -self.tolerance) {
            self.violation_count += 1;
            self.pass = false;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(Violation { points: points(), margin });
            }
        }
    }

    /// The first witness, if any.
    pub fn witness(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Uniform point in `[lo, hi]` coordinate-wise.
pub(crate) fn uniform_between(rng: &mut rng::Rng, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter().zip(hi).map(|(&a, &b)| a + rng.random::<f64>() * (b - a)).collect()
}

/// A random point of a down-closed region: a uniform point of its box,
/// halved until it is feasible.
pub fn sample_feasible(region: &dyn Region, rng: &mut rng::Rng) -> Vec<f64> {
    let n = region.dim();
    let mut y = uniform_between(rng, &vec![0.0; n], region.upper());
    for _ in 0..64 {
        if region.contains(&y, 0.0) {
            return y;
        }
        y.iter_mut().for_each(|v| *v *= 0.5);
    }
    vec![0.0; n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_pass_iff_no_violations() {
        let mut r = CheckReport::new("p", 1e-7);
        r.record(0.5, Vec::new);
        r.record(-1e-8, Vec::new);
        assert!(r.pass && r.violations.is_empty());
        assert_eq!(r.worst_margin, -1e-8);
        r.record(-1.0, || vec![vec![1.0]]);
        assert!(!r.pass);
        assert_eq!(r.witness().unwrap().points, vec![vec![1.0]]);
        assert_eq!(r.samples, 3);
    }

    #[test]
    fn feasible_samples_are_feasible() {
        let c = crate::constraints::CardinalityPolytope::new(vec![1.0; 4], 0.5).unwrap();
        let mut rng = rng::stream(1, rng::streams::CHECKS);
        for _ in 0..200 {
            assert!(c.contains(&sample_feasible(&c, &mut rng), 0.0));
        }
    }
}
