//! Instance generation, graph loading and the instance file format.

pub mod build;
pub mod generate;
pub mod graph;
pub mod random;
pub mod schema;

pub use build::{
    activation_probabilities, budget_constraint, build_influence_instance, build_influence_instance_with_cap,
    build_revenue_instance, logistic, revenue_preset, RevenuePreset, DEFAULT_INFLUENCE_BUDGET_FRACTION,
    DEFAULT_INFLUENCE_CAP, REVENUE_PRESETS,
};
pub use generate::{
    gen_quadratic_instance, gen_softmax_instance, random_orthogonal, softmax_eigenvalues, synthetic_bipartite,
    synthetic_social,
};
pub use graph::{load_bipartite, load_social, parse_edge_list, BipartiteGraph, SocialGraph};
pub use random::{
    family_battery, random_cut, random_edges, random_flid, random_gibbs, random_influence, random_ising, random_mean_field,
    random_revenue, random_set_cover,
};
pub use schema::{generate, influence_instance, revenue_instance, Instance, ObjectiveSpec, Problem, GENERATED_FAMILIES};
