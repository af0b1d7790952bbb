use std::path::PathBuf;

use drsubmax::constraints::Region;
use drsubmax::instances::{
    build_influence_instance, build_revenue_instance, gen_quadratic_instance, gen_softmax_instance, generate,
    load_bipartite, load_social, revenue_preset, synthetic_bipartite, synthetic_social, Instance, ObjectiveSpec,
};
use drsubmax::verify::{check_dr, check_weak_dr, CheckOptions};
use drsubmax::{Error, Objective};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn forum_fixture_matches_hand_count() {
    let g = load_bipartite(fixture("forum_sample.txt")).unwrap();
    assert_eq!((g.users, g.forums), (5, 4));
    assert_eq!(g.edge_count(), 7);
    assert_eq!(
        g.edges,
        vec![(0, 0, 2.0), (0, 1, 4.0), (1, 0, 1.0), (1, 2, 1.0), (2, 3, 3.0), (3, 3, 1.0), (4, 1, 1.0)]
    );
    assert_eq!(g.edges.iter().map(|e| e.2).sum::<f64>(), 13.0);
    assert_eq!(g.degrees(), vec![2, 2, 1, 1, 1]);
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(load_bipartite(fixture("absent.txt")), Err(Error::Io(_))));
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "# c\n0 1 2\n1 two 3\n").unwrap();
    match load_social(&path) {
        Err(Error::Parse { line, path: p, .. }) => {
            assert_eq!(line, 3);
            assert_eq!(p, path);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn influence_instance_from_fixture_is_dr() {
    let g = load_bipartite(fixture("forum_sample.txt")).unwrap();
    let f = build_influence_instance(&g).unwrap();
    assert_eq!(f.dim(), 5);
    let r = check_dr(&f, &CheckOptions::default()).unwrap();
    assert!(r.pass, "worst margin {}", r.worst_margin);
}

#[test]
fn synthetic_influence_instances_are_dr() {
    for seed in 0..3 {
        let f = build_influence_instance(&synthetic_bipartite(15, 5, seed).unwrap()).unwrap();
        let r = check_dr(&f, &CheckOptions { samples: 300, ..Default::default() }).unwrap();
        assert!(r.pass, "seed {seed}: {}", r.worst_margin);
    }
}

#[test]
fn revenue_instances_are_weakly_dr() {
    for preset in ["reality_mining", "infectious", "ego_facebook"] {
        let p = revenue_preset(preset).unwrap();
        let g = synthetic_social(12, 0.3, 4).unwrap();
        let (f, c) = build_revenue_instance(&g, p.q, p.u, p.budget_fraction).unwrap();
        assert!((c.budget() - p.budget_fraction * 12.0 * p.u).abs() < 1e-9);
        let r = check_weak_dr(&f, &CheckOptions::default()).unwrap();
        assert!(r.pass, "{preset}: {}", r.worst_margin);
    }
}

#[test]
fn generators_are_bit_identical_per_seed() {
    let (a, _) = gen_quadratic_instance(4, false, 21).unwrap();
    let (b, _) = gen_quadratic_instance(4, false, 21).unwrap();
    assert_eq!(a.hessian(), b.hessian());
    assert_eq!(a.linear_term(), b.linear_term());
    assert_eq!(a.constant().to_bits(), b.constant().to_bits());
    let (s, c) = gen_softmax_instance(8, 5).unwrap();
    assert_eq!(s.kernel(), gen_softmax_instance(8, 5).unwrap().0.kernel());
    assert_eq!(c.budget(), 4.0);
}

#[test]
fn generated_quadratic_is_dr_with_nonneg_gradient_at_top() {
    let (f, _) = gen_quadratic_instance(3, true, 8).unwrap();
    assert!(check_dr(&f, &CheckOptions::default()).unwrap().pass);
    assert!(f.gradient(&[1.0; 3]).unwrap().iter().all(|&g| g >= 0.0));
}

#[test]
fn instance_files_round_trip_and_resolve_paths() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("forum_sample.txt"), dir.path().join("forum.txt")).unwrap();
    let inst = Instance::from_json(
        r#"{"objective": {"family": "influence_graph", "params": {"path": "forum.txt", "users": 3}},
            "constraint": {"type": "cardinality", "u": 5, "b": 3}}"#,
    )
    .unwrap();
    let p = inst.build(Some(dir.path())).unwrap();
    assert_eq!(p.objective.dim(), 3);
    assert!(inst.build(None).is_err());

    let path = dir.path().join("inst.json");
    let generated = generate("quadratic", 3, 2).unwrap();
    generated.save(&path).unwrap();
    assert_eq!(Instance::load(&path).unwrap(), generated);
    assert!(matches!(generated.objective, ObjectiveSpec::Quadratic { .. }));
}

#[test]
fn box_constraint_defaults_to_objective_domain() {
    let inst = generate("revenue", 6, 3).unwrap();
    let mut as_box = inst.clone();
    as_box.constraint = drsubmax::constraints::ConstraintSpec::Box { upper: None };
    let p = as_box.build(None).unwrap();
    assert_eq!(p.constraint.upper(), p.objective.domain().upper());
}
