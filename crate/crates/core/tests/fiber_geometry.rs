use std::collections::BTreeSet;

use bimatch::fiber::fiber_system;
use bimatch::fixtures::example_one;
use bimatch::polytope::{feasible_grid_points, grid_bounds, polytope_vertices};
use bimatch::{
    brute_force_projections, enumerate_fiber_vertices, fiber_permutation, fiber_vertex, FiberVertex, Instance,
    Projection, Sense, StandardLp,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn y(v: &[i64]) -> Projection {
    Projection::from_i64(v)
}

fn printed_vertices() -> Vec<FiberVertex> {
    let grids: [[i64; 16]; 4] = [
        [0, 0, 0, 20, 0, 10, 10, 0, 20, 0, 0, 0, 0, 10, 10, 0],
        [0, 10, 0, 10, 10, 0, 10, 0, 0, 10, 0, 10, 10, 0, 10, 0],
        [0, 5, 5, 10, 5, 15, 0, 0, 5, 0, 15, 0, 10, 0, 0, 10],
        [0, 4, 8, 8, 0, 16, 0, 4, 8, 0, 12, 0, 12, 0, 0, 8],
    ];
    grids
        .iter()
        .map(|g| FiberVertex::from_fractions(4, &g.iter().map(|&v| (v, 20)).collect::<Vec<_>>()))
        .collect()
}

/// Rank by plain Gaussian elimination over the rationals.
fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, pv) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * pv;
                }
            }
        }
        r += 1;
    }
    r
}

/// Independent vertex test: `x` satisfies the system, is nonnegative, and
/// the constraint columns on its support are linearly independent.
fn is_vertex(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
    let feasible = a.iter().zip(b).all(|(row, bi)| row.iter().zip(x).map(|(p, q)| p * q).sum::<BigRational>() == *bi);
    let support: Vec<usize> = (0..x.len()).filter(|&j| !x[j].is_zero()).collect();
    let columns: Vec<Vec<BigRational>> = support.iter().map(|&j| a.iter().map(|row| row[j].clone()).collect()).collect();
    feasible && x.iter().all(|v| !v.is_negative()) && rank(columns) == support.len()
}

#[test]
fn fractional_fiber_of_example_one() {
    let ex = example_one();
    let target = y(&[1, 2]);
    let verts = enumerate_fiber_vertices(&ex, &target).unwrap();
    assert_eq!(verts.len(), 92);
    assert!(verts.iter().all(|v| !v.is_integral()));
    for v in printed_vertices() {
        assert!(verts.contains(&v), "missing\n{v}");
    }
    let (a, b) = fiber_system(&ex, &target).unwrap();
    for v in &verts {
        assert!(v.is_bistochastic());
        assert!(is_vertex(&a, &b, v.entries()), "not a vertex\n{v}");
        let back: Vec<BigRational> = target.coords().iter().cloned().map(BigRational::from).collect();
        assert_eq!(v.project(&ex), back);
    }
    // Every LP optimum over the fiber is one of the enumerated vertices.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let c: Vec<BigRational> = (0..16).map(|_| BigRational::from(BigInt::from(rng.gen_range(-9..=9)))).collect();
        let sol = StandardLp::new(a.clone(), b.clone(), c, Sense::Max).unwrap().solve().optimal().unwrap();
        assert!(verts.contains(&FiberVertex::new(4, sol.x)));
    }
}

#[test]
fn empty_and_integral_fibers() {
    let ex = example_one();
    assert!(fiber_vertex(&ex, &y(&[3, 4])).unwrap().is_none());
    assert!(enumerate_fiber_vertices(&ex, &y(&[3, 4])).unwrap().is_empty());
    for v in polytope_vertices(&ex).unwrap() {
        let face = enumerate_fiber_vertices(&ex, &v).unwrap();
        assert!(!face.is_empty());
        assert!(face.iter().all(FiberVertex::is_integral), "fractional vertex over {v}");
        let m = fiber_permutation(&ex, &v).unwrap();
        assert_eq!(ex.project(&m).unwrap(), v);
    }
}

#[test]
fn fiber_lp_agrees_with_projection_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=2);
        let w: Vec<Vec<Vec<i64>>> =
            (0..d).map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect()).collect()).collect();
        let inst = Instance::from_i64(n, d, &w).unwrap();
        let exact = brute_force_projections(&inst).unwrap();
        let feasible = feasible_grid_points(&inst).unwrap();
        let bounds = grid_bounds(&inst);
        assert!(exact.is_subset(&feasible));
        assert!(feasible.iter().all(|p| bounds.contains(p)));
        for p in bounds.points() {
            let v = fiber_vertex(&inst, &p).unwrap();
            assert_eq!(v.is_some(), feasible.contains(&p));
            if let Some(v) = v {
                assert!(v.is_bistochastic());
                let back: Vec<BigRational> = p.coords().iter().cloned().map(BigRational::from).collect();
                assert_eq!(v.project(&inst), back);
            }
        }
        let vertices: BTreeSet<Projection> = polytope_vertices(&inst).unwrap();
        for v in &vertices {
            assert!(exact.contains(v), "vertex {v} not attained by a matching");
        }
    }
}
