use std::sync::Arc;

use serde::Serialize;

use super::graph::{BipartiteGraph, SocialGraph};
use crate::constraints::CardinalityPolytope;
use crate::error::{Error, Result};
use crate::lattice::BoxDomain;
use crate::objectives::{Activation, FlidObjective, InfluenceObjective, RevenueIEObjective};

/// Investment cap per user.
pub const DEFAULT_INFLUENCE_CAP: f64 = 5.0;
/// Share of `n · cap` that may be invested in total.
pub const DEFAULT_INFLUENCE_BUDGET_FRACTION: f64 = 0.2;

pub fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Per-user activation probabilities `σ(−d_i)`, with `d_i` the number of
/// forums user `i` posted on.
pub fn activation_probabilities(g: &BipartiteGraph) -> Vec<f64> {
    g.degrees().iter().map(|&d| logistic(-(d as f64))).collect()
}

/// Facility location over forums (weights are post counts) seen through
/// independent user activations `p_i = σ(−d_i)` on `[0, cap]ⁿ`.
pub fn build_influence_instance(g: &BipartiteGraph) -> Result<InfluenceObjective> {
    build_influence_instance_with_cap(g, DEFAULT_INFLUENCE_CAP)
}

pub fn build_influence_instance_with_cap(g: &BipartiteGraph, cap: f64) -> Result<InfluenceObjective> {
    if g.users == 0 || g.forums == 0 {
        return Err(Error::InvalidParameter("influence graph must have users and forums".into()));
    }
    if !(cap > 0.0) || !cap.is_finite() {
        return Err(Error::InvalidParameter("investment cap must be > 0".into()));
    }
    let model = FlidObjective::facility_location(g.weight_rows())?;
    let activation = Activation::Independent { p: activation_probabilities(g) };
    InfluenceObjective::new(Arc::new(model), activation, BoxDomain::new(vec![cap; g.users])?)
}

/// `{0 ≤ x ≤ cap, Σx ≤ fraction · n · cap}`.
pub fn budget_constraint(n: usize, cap: f64, fraction: f64) -> Result<CardinalityPolytope> {
    if !(fraction > 0.0) || !fraction.is_finite() {
        return Err(Error::InvalidParameter("budget fraction must be > 0".into()));
    }
    CardinalityPolytope::new(vec![cap; n], fraction * n as f64 * cap)
}

/// Revenue model over a contact graph with `{0 ≤ x ≤ u, Σx ≤ fraction·n·u}`.
pub fn build_revenue_instance(
    g: &SocialGraph,
    q: f64,
    u: f64,
    budget_fraction: f64,
) -> Result<(RevenueIEObjective, CardinalityPolytope)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
    }
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::InvalidParameter(format!("u = {u} must be > 0")));
    }
    if g.nodes == 0 {
        return Err(Error::InvalidParameter("social graph has no nodes".into()));
    }
    let objective = RevenueIEObjective::new(g.weight_rows(), q, BoxDomain::new(vec![u; g.nodes])?)?;
    Ok((objective, budget_constraint(g.nodes, u, budget_fraction)?))
}

/// Experimental parameters of a contact graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RevenuePreset {
    pub name: &'static str,
    pub q: f64,
    pub u: f64,
    pub budget_fraction: f64,
}

pub const REVENUE_PRESETS: [RevenuePreset; 5] = [
    RevenuePreset { name: "reality_mining", q: 0.75, u: 10.0, budget_fraction: 0.2 },
    RevenuePreset { name: "residence_hall", q: 0.75, u: 10.0, budget_fraction: 0.4 },
    RevenuePreset { name: "infectious", q: 0.7, u: 20.0, budget_fraction: 0.2 },
    RevenuePreset { name: "urv", q: 0.8, u: 20.0, budget_fraction: 0.2 },
    RevenuePreset { name: "ego_facebook", q: 0.9, u: 40.0, budget_fraction: 0.1 },
];

pub fn revenue_preset(name: &str) -> Result<RevenuePreset> {
    REVENUE_PRESETS
        .iter()
        .find(|p| p.name == name)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("unknown revenue preset `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Region;
    use crate::instances::generate::{synthetic_bipartite, synthetic_social};
    use crate::objective::Objective;

    #[test]
    fn activation_probability_examples() {
        let g = BipartiteGraph { users: 2, forums: 3, edges: vec![(1, 0, 2.0), (1, 2, 1.0)] };
        let p = activation_probabilities(&g);
        assert_eq!(p[0], 0.5);
        assert!((p[1] - 0.119_202_922_022_117_57).abs() < 1e-15);
    }

    #[test]
    fn higher_degree_lowers_probability() {
        let g = synthetic_bipartite(30, 8, 4).unwrap();
        let d = g.degrees();
        let p = activation_probabilities(&g);
        for i in 0..30 {
            for j in 0..30 {
                if d[i] > d[j] {
                    assert!(p[i] < p[j]);
                }
            }
        }
    }

    #[test]
    fn influence_objective_shape() {
        let g = synthetic_bipartite(12, 4, 2).unwrap();
        let f = build_influence_instance(&g).unwrap();
        assert_eq!(f.dim(), 12);
        assert_eq!(f.domain().upper(), &[DEFAULT_INFLUENCE_CAP; 12]);
        assert!(f.flags().dr_submodular && f.flags().monotone);
        assert!(build_influence_instance(&BipartiteGraph::default()).is_err());
    }

    #[test]
    fn revenue_presets_and_budget() {
        let p = revenue_preset("reality_mining").unwrap();
        assert_eq!((p.q, p.u, p.budget_fraction), (0.75, 10.0, 0.2));
        let p = revenue_preset("infectious").unwrap();
        assert_eq!((p.q, p.u, p.budget_fraction), (0.7, 20.0, 0.2));
        let g = synthetic_social(10, 0.3, 5).unwrap();
        let (f, c) = build_revenue_instance(&g, p.q, p.u, p.budget_fraction).unwrap();
        assert_eq!(f.dim(), 10);
        assert!((c.budget() - 0.2 * 10.0 * 20.0).abs() < 1e-12);
        let (_, full) = build_revenue_instance(&g, 0.5, 2.0, 1.0).unwrap();
        assert!(full.contains(&[2.0; 10], 0.0));
    }

    #[test]
    fn revenue_parameter_ranges() {
        let g = synthetic_social(4, 0.5, 1).unwrap();
        assert!(build_revenue_instance(&g, 1.0, 1.0, 0.2).is_err());
        assert!(build_revenue_instance(&g, 0.0, 1.0, 0.2).is_err());
        assert!(build_revenue_instance(&g, 0.5, 0.0, 0.2).is_err());
        assert!(revenue_preset("nope").is_err());
    }
}
