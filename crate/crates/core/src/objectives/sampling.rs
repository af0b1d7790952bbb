use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::{Objective, ObjectiveFlags, SetFunction};
use crate::rng::{self, streams};

pub const DEFAULT_SAMPLES: usize = 1_000;

fn draw(rng: &mut rng::Rng, x: &[f64], mask: &mut [bool], uniforms: &mut [f64]) {
    for ((m, u), &p) in mask.iter_mut().zip(uniforms.iter_mut()).zip(x) {
        *u = rng.random::<f64>();
        *m = *u < p;
    }
}

fn check_inputs(f: &dyn SetFunction, x: &[f64], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    BoxDomain::unit(f.ground_size()).check(x)
}

/// Mean of `F(S)` over `k` subsets drawn with inclusion probabilities `x`.
pub fn multilinear_sample_value(f: &dyn SetFunction, x: &[f64], k: usize, seed: u64) -> Result<f64> {
    check_inputs(f, x, k)?;
    let mut rng = rng::stream(seed, streams::SAMPLING);
    let n = x.len();
    let mut mask = vec![false; n];
    let mut uniforms = vec![0.0; n];
    let mut total = 0.0;
    for _ in 0..k {
        draw(&mut rng, x, &mut mask, &mut uniforms);
        total += f.eval_set(&mask)?;
    }
    Ok(total / k as f64)
}

/// Sampled value and gradient of the multilinear extension of `f`.
///
/// Each gradient coordinate averages `F(S ∪ {i}) − F(S ∖ {i})` over the same
/// draws used for the value.
pub fn multilinear_sample_estimate(
    f: &dyn SetFunction,
    x: &[f64],
    k: usize,
    seed: u64,
) -> Result<(f64, Vec<f64>)> {
    check_inputs(f, x, k)?;
    let mut rng = rng::stream(seed, streams::SAMPLING);
    let n = x.len();
    let mut mask = vec![false; n];
    let mut uniforms = vec![0.0; n];
    let mut total = 0.0;
    let mut grad = vec![0.0; n];
    for _ in 0..k {
        draw(&mut rng, x, &mut mask, &mut uniforms);
        total += f.eval_set(&mask)?;
        for i in 0..n {
            let original = mask[i];
            mask[i] = true;
            let with = f.eval_set(&mask)?;
            mask[i] = false;
            let without = f.eval_set(&mask)?;
            mask[i] = original;
            grad[i] += with - without;
        }
    }
    let kf = k as f64;
    grad.iter_mut().for_each(|g| *g /= kf);
    Ok((total / kf, grad))
}

/// Hoeffding radius `ε` with `exp(−kε²/2) = failure_probability`.
pub fn hoeffding_epsilon(k: usize, failure_probability: f64) -> f64 {
    (2.0 * (1.0 / failure_probability).ln() / k as f64).sqrt()
}

/// A set function's multilinear extension evaluated by sampling with a fixed
/// seed, so repeated evaluations at one point agree.
#[derive(Clone)]
pub struct SampledMultilinear {
    set_function: Arc<dyn SetFunction>,
    samples: usize,
    seed: u64,
    flags: ObjectiveFlags,
    domain: BoxDomain,
}

impl SampledMultilinear {
    /// `flags` are the caller's assertion about `F` (e.g. submodular and
    /// monotone); they are not verified.
    pub fn new(
        set_function: Arc<dyn SetFunction>,
        samples: usize,
        seed: u64,
        flags: ObjectiveFlags,
    ) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        let n = set_function.ground_size();
        if n == 0 {
            return Err(Error::InvalidParameter("ground set must be non-empty".into()));
        }
        Ok(SampledMultilinear {
            set_function,
            samples,
            seed,
            flags,
            domain: BoxDomain::unit(n),
        })
    }
}

impl Objective for SampledMultilinear {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn flags(&self) -> ObjectiveFlags {
        self.flags
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        multilinear_sample_value(self.set_function.as_ref(), x, self.samples, self.seed)
    }

    fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        multilinear_sample_estimate(self.set_function.as_ref(), x, self.samples, self.seed)
    }

    fn name(&self) -> &str {
        "sampled_multilinear"
    }
}
