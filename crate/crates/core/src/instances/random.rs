use std::sync::Arc;

use rand::Rng as _;

use super::build::{build_influence_instance, build_revenue_instance};
use super::generate::{gen_quadratic_instance, gen_softmax_instance, synthetic_bipartite, synthetic_social};
use crate::error::Result;
use crate::objective::Objective;
use crate::objectives::{
    Concept, FlidObjective, GibbsPolynomial, InfluenceObjective, MeanFieldKLObjective, RevenueIEObjective,
    SetCoverObjective, Term, TwoBumps,
};
use crate::rng::{self, streams, Rng};

fn distinct(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    let mut items: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.random_range(i..n);
        items.swap(i, j);
    }
    items.truncate(k.min(n));
    items
}

/// Pseudo-Boolean polynomial with unary terms in `[−1, 1]` and 2n terms on
/// 2 or 3 variables. Interaction coefficients are in `[−1, 0]` when
/// `submodular`, otherwise in `[−1, 1]`.
pub fn random_gibbs(n: usize, submodular: bool, seed: u64) -> Result<GibbsPolynomial> {
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let mut terms: Vec<Term> = (0..n)
        .map(|i| Term { coefficient: rng.random_range(-1.0..1.0), vars: vec![i] })
        .collect();
    if n >= 2 {
        for _ in 0..2 * n {
            let size = rng.random_range(2..=3.min(n));
            let coefficient = if submodular { -rng.random::<f64>() } else { rng.random_range(-1.0..1.0) };
            terms.push(Term { coefficient, vars: distinct(&mut rng, n, size) });
        }
    }
    GibbsPolynomial::new(n, terms)
}

/// Each pair `{i, j}` is an edge with probability `density`, weight in
/// `(0, 1]`.
pub fn random_edges(n: usize, density: f64, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                edges.push((i, j, 1.0 - rng.random::<f64>()));
            }
        }
    }
    edges
}

pub fn random_cut(n: usize, density: f64, seed: u64) -> Result<GibbsPolynomial> {
    GibbsPolynomial::undirected_cut(n, &random_edges(n, density, seed))
}

/// Ising model with unary terms in `[−1, 1]` and attractive-to-zero
/// (nonpositive) couplings, so the extension is DR-submodular.
pub fn random_ising(n: usize, seed: u64) -> Result<GibbsPolynomial> {
    let mut rng = rng::stream(seed ^ 0x9e37_79b9, streams::GENERATOR);
    let unary: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let pairwise: Vec<_> = random_edges(n, 0.5, seed).into_iter().map(|(i, j, w)| (i, j, -w)).collect();
    GibbsPolynomial::ising(&unary, &pairwise)
}

/// `n` items, `d` latent dimensions with weights in `[0, 1)`; utilities in
/// `[−0.5, 0.5)`, or zero for facility location.
pub fn random_flid(n: usize, d: usize, facility_location: bool, seed: u64) -> Result<FlidObjective> {
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let weights: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
    if facility_location {
        FlidObjective::facility_location(weights)
    } else {
        let utilities = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        FlidObjective::new(weights, utilities)
    }
}

/// `concepts` concepts with weights in `(0, 1]`, each covered by 1 to 3
/// random items.
pub fn random_set_cover(n: usize, concepts: usize, seed: u64) -> Result<SetCoverObjective> {
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let concepts = (0..concepts)
        .map(|_| {
            let k = rng.random_range(1..=3.min(n));
            Concept { weight: 1.0 - rng.random::<f64>(), covered_by: distinct(&mut rng, n, k) }
        })
        .collect();
    SetCoverObjective::new(n, concepts)
}

pub fn random_influence(users: usize, forums: usize, seed: u64) -> Result<InfluenceObjective> {
    build_influence_instance(&synthetic_bipartite(users, forums, seed)?)
}

/// Revenue on a contact graph of density 0.3 with `q = 0.75`, `u = 2`.
pub fn random_revenue(n: usize, seed: u64) -> Result<RevenueIEObjective> {
    let g = synthetic_social(n, 0.3, seed)?;
    Ok(build_revenue_instance(&g, 0.75, 2.0, 1.0)?.0)
}

/// Mean-field objective of a random submodular Gibbs model.
pub fn random_mean_field(n: usize, seed: u64) -> Result<MeanFieldKLObjective> {
    MeanFieldKLObjective::new(Arc::new(random_gibbs(n, true, seed)?))
}

/// One seeded instance of every objective family with closed-form
/// gradients, named by family.
pub fn family_battery(n: usize, seed: u64) -> Result<Vec<(&'static str, Arc<dyn Objective>)>> {
    Ok(vec![
        ("quadratic", Arc::new(gen_quadratic_instance(n, false, seed)?.0) as Arc<dyn Objective>),
        ("quadratic_monotone", Arc::new(gen_quadratic_instance(n, true, seed)?.0)),
        ("softmax", Arc::new(gen_softmax_instance(n, seed)?.0)),
        ("gibbs", Arc::new(random_gibbs(n, true, seed)?)),
        ("gibbs_general", Arc::new(random_gibbs(n, false, seed)?)),
        ("cut", Arc::new(random_cut(n, 0.5, seed)?)),
        ("ising", Arc::new(random_ising(n, seed)?)),
        ("flid", Arc::new(random_flid(n, 3, false, seed)?)),
        ("facility_location", Arc::new(random_flid(n, 3, true, seed)?)),
        ("set_cover", Arc::new(random_set_cover(n, 2 * n, seed)?)),
        ("influence", Arc::new(random_influence(n, (n / 2).max(1), seed)?)),
        ("revenue", Arc::new(random_revenue(n, seed)?)),
        ("mean_field", Arc::new(random_mean_field(n, seed)?)),
        ("two_bumps", Arc::new(TwoBumps::new())),
    ])
}
