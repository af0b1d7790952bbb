use drsubmax::constraints::{
    lmo_value, BoxConstraint, CardinalityPolytope, ConstraintSpec, DownClosedPolytope, Region, Shrunken,
};
use drsubmax::lattice::{dot, sub, BoxDomain};
use drsubmax::rng::{self, streams};
use drsubmax::verify::sample_feasible;
use proptest::prelude::*;
use rand::Rng as _;

fn random_direction(rng: &mut rng::Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[test]
fn greedy_cardinality_lmo_matches_simplex() {
    let mut rng = rng::stream(1, streams::CHECKS);
    for trial in 0..1000 {
        let n = 2 + trial % 6;
        let upper: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
        let budget = rng.random::<f64>() * upper.iter().sum::<f64>();
        let card = CardinalityPolytope::new(upper.clone(), budget).unwrap();
        let as_polytope = DownClosedPolytope::new(vec![vec![1.0; n]], vec![budget]).unwrap();
        let g = random_direction(&mut rng, n);
        let greedy = lmo_value(&card, &g).unwrap();
        let box_cap = Shrunken::new(&as_polytope, upper.clone()).unwrap();
        let simplex = dot(&box_cap.lmo(&g, None).unwrap(), &g);
        assert!((greedy - simplex).abs() < 1e-9, "trial {trial}: {greedy} vs {simplex}");
    }
}

#[test]
fn lmo_outputs_are_feasible_and_optimal_against_samples() {
    let mut rng = rng::stream(2, streams::CHECKS);
    let regions: Vec<Box<dyn Region>> = vec![
        Box::new(BoxConstraint::new(BoxDomain::new(vec![1.0, 2.0, 0.5]).unwrap())),
        Box::new(CardinalityPolytope::new(vec![1.0, 2.0, 0.5], 1.5).unwrap()),
        Box::new(DownClosedPolytope::new(vec![vec![1.0, 2.0, 1.0], vec![0.5, 0.1, 3.0]], vec![2.0, 1.0]).unwrap()),
    ];
    for region in &regions {
        for _ in 0..200 {
            let g = random_direction(&mut rng, 3);
            let v = region.lmo(&g, None).unwrap();
            assert!(region.contains(&v, 1e-9));
            let best = dot(&v, &g);
            for _ in 0..20 {
                let y = sample_feasible(region.as_ref(), &mut rng);
                assert!(dot(&y, &g) <= best + 1e-9);
            }
        }
    }
}

#[test]
fn projection_satisfies_variational_inequality() {
    let mut rng = rng::stream(3, streams::CHECKS);
    let card = CardinalityPolytope::new(vec![1.0, 0.5, 2.0, 1.0], 2.0).unwrap();
    let bx = BoxConstraint::new(BoxDomain::new(vec![1.0, 0.5, 2.0, 1.0]).unwrap());
    for region in [&card as &dyn Region, &bx] {
        for _ in 0..300 {
            let y: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..3.0)).collect();
            let p = region.project(&y).unwrap();
            assert!(region.contains(&p, 1e-9));
            let r = sub(&y, &p);
            for _ in 0..10 {
                let z = sample_feasible(region, &mut rng);
                assert!(dot(&r, &sub(&z, &p)) <= 1e-9);
            }
        }
    }
}

#[test]
fn polytope_projection_is_unsupported() {
    let p = DownClosedPolytope::new(vec![vec![1.0, 1.0]], vec![1.0]).unwrap();
    assert!(!p.supports_projection());
    assert!(p.project(&[0.3, 0.3]).is_err());
}

#[test]
fn shrunken_lmo_respects_cap() {
    let card = CardinalityPolytope::new(vec![1.0; 3], 2.0).unwrap();
    let q = Shrunken::complement_of(&card, &[1.0; 3], &[0.75, 0.0, 0.25]).unwrap();
    let v = q.lmo(&[1.0, 1.0, 1.0], None).unwrap();
    assert!(v[0] <= 0.25 + 1e-12 && v[2] <= 0.75 + 1e-12);
    assert!((v.iter().sum::<f64>() - 2.0).abs() < 1e-12);
}

#[test]
fn constraint_spec_json() {
    let spec: ConstraintSpec = serde_json::from_str(r#"{"type": "cardinality", "u": [1, 2], "b": 1.5}"#).unwrap();
    let c = spec.build(2).unwrap();
    assert!(c.contains(&[1.0, 0.5], 0.0) && !c.contains(&[1.0, 1.0], 1e-12));
    assert!(serde_json::from_str::<ConstraintSpec>(r#"{"type": "box", "bogus": 1}"#).is_err());
    assert_eq!(c.spec().build(2).unwrap().spec(), c.spec());
}

proptest! {
    #[test]
    fn regions_are_down_closed(
        upper in proptest::collection::vec(0.1f64..3.0, 1..6),
        frac in 0.05f64..1.0,
        shrink in proptest::collection::vec(0.0f64..=1.0, 6),
        seed in any::<u64>(),
    ) {
        let n = upper.len();
        let budget = frac * upper.iter().sum::<f64>();
        let card = CardinalityPolytope::new(upper.clone(), budget).unwrap();
        let poly = DownClosedPolytope::new(vec![upper.iter().map(|u| 1.0 / u).collect()], vec![frac * n as f64]).unwrap();
        let mut rng = rng::stream(seed, streams::CHECKS);
        for region in [&card as &dyn Region, &poly] {
            let x = sample_feasible(region, &mut rng);
            prop_assert!(region.contains(&x, 1e-12));
            let y: Vec<f64> = x.iter().zip(&shrink).map(|(a, s)| a * s).collect();
            prop_assert!(region.contains(&y, 1e-12));
            prop_assert!(region.contains(&vec![0.0; n], 0.0));
        }
    }
}
