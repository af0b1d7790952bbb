use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::graph::{BipartiteGraph, SocialGraph};
use crate::constraints::CardinalityPolytope;
use crate::error::{Error, Result};
use crate::lattice::BoxDomain;
use crate::objective::Objective;
use crate::objectives::{QuadraticObjective, SoftmaxObjective};
use crate::rng::{self, streams};

/// Largest softmax eigenvalue.
pub const SOFTMAX_MAX_EIGENVALUE: f64 = 10.0;
/// Gradient floor at `ū` for monotone quadratics.
pub const MONOTONE_MARGIN: f64 = 0.1;
/// Dimension up to which the quadratic offset uses every vertex.
const VERTEX_ENUMERATION_LIMIT: usize = 16;
const OFFSET_SAMPLES: usize = 4096;

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `d_i = 10 i / n` for `i = 1..n`: evenly spaced in `(0, 10]`, avoiding a
/// singular kernel.
pub fn softmax_eigenvalues(n: usize) -> Vec<f64> {
    (1..=n).map(|i| SOFTMAX_MAX_EIGENVALUE * i as f64 / n as f64).collect()
}

/// Orthogonal factor of the QR decomposition of an `n × n` standard
/// Gaussian matrix, with columns flipped so that `R` has a positive diagonal.
pub fn random_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `L = U diag(d) Uᵀ` with `Σx ≤ n/2` on the unit box.
pub fn gen_softmax_instance(n: usize, seed: u64) -> Result<(SoftmaxObjective, CardinalityPolytope)> {
    require_positive(n)?;
    let u = random_orthogonal(n, seed);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(softmax_eigenvalues(n)));
    let l = &u * d * u.transpose();
    let l = (&l + l.transpose()) * 0.5;
    let constraint = CardinalityPolytope::new(vec![1.0; n], 0.5 * n as f64)?;
    Ok((SoftmaxObjective::new(l)?, constraint))
}

/// `f(x) = ½ xᵀHx + hᵀx + c` on the unit box with `H` symmetric and uniform
/// in `[−1, 0]`, so `f` is DR-submodular. Monotone mode uses
/// `h_i = −Σ_j H_ij + margin`; otherwise `h = −0.2 Hᵀ1`. The offset `c`
/// lifts the minimum over the box vertices (sampled points for large `n`) to
/// zero. The constraint is `Σx ≤ n/2`.
pub fn gen_quadratic_instance(
    n: usize,
    monotone: bool,
    seed: u64,
) -> Result<(QuadraticObjective, CardinalityPolytope)> {
    require_positive(n)?;
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = -rng.random::<f64>();
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let upper = vec![1.0; n];
    let linear: Vec<f64> = (0..n)
        .map(|i| {
            let row: f64 = (0..n).map(|j| h[(i, j)] * upper[j]).sum();
            if monotone {
                -row + MONOTONE_MARGIN
            } else {
                -0.2 * row
            }
        })
        .collect();
    let domain = BoxDomain::new(upper.clone())?;
    let base = QuadraticObjective::new(h.clone(), linear.clone(), 0.0, domain.clone())?;
    let lowest = if n <= VERTEX_ENUMERATION_LIMIT {
        // Coordinate-wise concave, so the minimum over the box is at a vertex.
        let mut lowest = f64::INFINITY;
        for bits in 0u32..(1u32 << n) {
            let v: Vec<f64> = (0..n).map(|i| if bits >> i & 1 == 1 { upper[i] } else { 0.0 }).collect();
            lowest = lowest.min(base.value(&v)?);
        }
        lowest
    } else {
        let mut lowest: f64 = 0.0;
        for _ in 0..OFFSET_SAMPLES {
            let v: Vec<f64> = upper.iter().map(|&u| if rng.random::<bool>() { u } else { 0.0 }).collect();
            lowest = lowest.min(base.value(&v)?);
        }
        lowest
    };
    let objective = QuadraticObjective::new(h, linear, (-lowest).max(0.0), domain)?;
    let constraint = CardinalityPolytope::new(upper, 0.5 * n as f64)?;
    Ok((objective, constraint))
}

/// Random user–forum posts: every user posts on 1 to 4 forums, with forum
/// choice skewed towards low indices and 1 to 10 posts per pair.
pub fn synthetic_bipartite(users: usize, forums: usize, seed: u64) -> Result<BipartiteGraph> {
    require_positive(users)?;
    require_positive(forums)?;
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let mut edges = Vec::new();
    for user in 0..users {
        let count = rng.random_range(1..=forums.min(4));
        for _ in 0..count {
            let r: f64 = rng.random();
            let forum = ((r * r) * forums as f64) as usize;
            edges.push((user, forum.min(forums - 1), rng.random_range(1..=10) as f64));
        }
    }
    let mut g = BipartiteGraph::from_edges(edges)?;
    g.users = users;
    g.forums = forums;
    Ok(g)
}

/// Random directed contact graph: each ordered pair is an edge with
/// probability `density`, weighted by 1 to 20 contacts.
pub fn synthetic_social(nodes: usize, density: f64, seed: u64) -> Result<SocialGraph> {
    require_positive(nodes)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter("density must lie in [0, 1]".into()));
    }
    let mut rng = rng::stream(seed, streams::GENERATOR);
    let mut edges = Vec::new();
    for a in 0..nodes {
        for b in 0..nodes {
            if a != b && rng.random::<f64>() < density {
                edges.push((a, b, rng.random_range(1..=20) as f64));
            }
        }
    }
    let mut g = SocialGraph::from_edges(edges)?;
    g.nodes = nodes;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Region;
    use crate::verify::{check_dr, CheckOptions};

    #[test]
    fn orthogonal_factor() {
        let u = random_orthogonal(5, 3);
        let err = (&u.transpose() * &u - DMatrix::<f64>::identity(5, 5)).amax();
        assert!(err < 1e-12);
    }

    #[test]
    fn softmax_spectrum_and_symmetry() {
        let (f, c) = gen_softmax_instance(4, 11).unwrap();
        let l = f.kernel();
        assert!((l - l.transpose()).amax() < 1e-12);
        let mut eig: Vec<f64> = l.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(softmax_eigenvalues(4)) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert_eq!(c.budget(), 2.0);
        assert_eq!(c.upper(), &[1.0; 4]);
    }

    #[test]
    fn softmax_is_deterministic() {
        let a = gen_softmax_instance(6, 7).unwrap().0;
        let b = gen_softmax_instance(6, 7).unwrap().0;
        assert_eq!(a.kernel(), b.kernel());
        assert_ne!(a.kernel(), gen_softmax_instance(6, 8).unwrap().0.kernel());
    }

    #[test]
    fn quadratic_modes() {
        let (f, _) = gen_quadratic_instance(5, true, 2).unwrap();
        assert!(f.gradient(&[1.0; 5]).unwrap().iter().all(|&g| g >= MONOTONE_MARGIN - 1e-12));
        assert!(f.flags().monotone && f.flags().dr_submodular);
        let (g, _) = gen_quadratic_instance(5, false, 2).unwrap();
        assert!(!g.flags().monotone);
        assert!(check_dr(&g, &CheckOptions { samples: 200, ..Default::default() }).unwrap().pass);
        assert!(g.value(&[0.0; 5]).unwrap() >= 0.0 && g.value(&[1.0; 5]).unwrap() >= -1e-12);
    }

    #[test]
    fn quadratic_offset_makes_vertices_nonnegative() {
        for seed in 0..10 {
            let (f, _) = gen_quadratic_instance(3, false, seed).unwrap();
            for bits in 0..8u32 {
                let v: Vec<f64> = (0..3).map(|i| (bits >> i & 1) as f64).collect();
                assert!(f.value(&v).unwrap() >= -1e-12);
            }
        }
    }

    #[test]
    fn synthetic_graphs_have_requested_size() {
        let g = synthetic_bipartite(50, 10, 1).unwrap();
        assert_eq!((g.users, g.forums), (50, 10));
        assert!(g.degrees().iter().all(|&d| (1..=4).contains(&d)));
        let s = synthetic_social(20, 0.2, 1).unwrap();
        assert_eq!(s.nodes, 20);
        assert!(s.edges.iter().all(|e| e.0 != e.1));
        assert_eq!(s, synthetic_social(20, 0.2, 1).unwrap());
    }
}
