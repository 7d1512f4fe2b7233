//! The multiobjective polytope `Π_w^n = w·Π^n ⊂ R^d` and edge directions of
//! the Birkhoff polytope.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fiber::{birkhoff_system, fiber_vertex};
use crate::instance::{Instance, Projection};
use crate::objective::Sense;
use crate::simplex::{LpSolution, StandardLp};

/// Tight integer box `[lower, upper]` containing every projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridBounds {
    pub lower: Vec<BigInt>,
    pub upper: Vec<BigInt>,
}

impl GridBounds {
    pub fn contains(&self, y: &Projection) -> bool {
        y.len() == self.lower.len()
            && y.coords().iter().zip(&self.lower).zip(&self.upper).all(|((v, lo), hi)| lo <= v && v <= hi)
    }

    /// Number of integer points in the box.
    pub fn size(&self) -> BigUint {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo + 1u32).to_biguint().expect("lower <= upper"))
            .product()
    }

    /// Integer points of the box in lexicographic order.
    pub fn points(&self) -> Vec<Projection> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| {
                let mut axis = Vec::new();
                let mut v = lo.clone();
                while &v <= hi {
                    axis.push(v.clone());
                    v += 1u32;
                }
                axis
            })
            .multi_cartesian_product()
            .map(Projection)
            .collect()
    }
}

/// Optimizes `w^k·x` over Π^n and returns the vertex found.
pub(crate) fn optimize_over_birkhoff(instance: &Instance, k: usize, sense: Sense) -> LpSolution {
    let n = instance.n();
    let (a, b) = birkhoff_system(n);
    let c = instance.matrix(k).iter().cloned().map(BigRational::from).collect();
    StandardLp::new(a, b, c, sense)
        .expect("Birkhoff system is well formed")
        .solve()
        .optimal()
        .expect("Π^n is a nonempty polytope")
}

/// `s_k = min w^k·x`, `t_k = max w^k·x` over Π^n, by 2d linear programs.
pub fn grid_bounds(instance: &Instance) -> GridBounds {
    let integer = |v: BigRational| {
        debug_assert!(v.is_integer(), "Birkhoff LP optimum must be integral");
        v.to_integer()
    };
    let (lower, upper) = (0..instance.d())
        .map(|k| {
            let lo = optimize_over_birkhoff(instance, k, Sense::Min).value;
            let hi = optimize_over_birkhoff(instance, k, Sense::Max).value;
            (integer(lo), integer(hi))
        })
        .unzip();
    GridBounds { lower, upper }
}

/// Box points whose fiber is nonempty, in lexicographic order.
pub fn feasible_grid_points(instance: &Instance) -> Result<BTreeSet<Projection>> {
    feasible_in_box(instance, &grid_bounds(instance))
}

pub(crate) fn feasible_in_box(instance: &Instance, bounds: &GridBounds) -> Result<BTreeSet<Projection>> {
    let found = bounds
        .points()
        .into_par_iter()
        .map(|y| Ok(fiber_vertex(instance, &y)?.map(|_| y)))
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Whether `y` is a convex combination of `points`, decided by LP.
pub fn hull_contains<'a, I>(points: I, y: &Projection) -> bool
where
    I: IntoIterator<Item = &'a Projection>,
{
    let points: Vec<&Projection> = points.into_iter().collect();
    if points.is_empty() {
        return false;
    }
    let d = y.len();
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|k| points.iter().map(|p| BigRational::from(p.coords()[k].clone())).collect())
        .collect();
    a.push(vec![BigRational::one(); points.len()]);
    let mut b: Vec<BigRational> = y.coords().iter().cloned().map(BigRational::from).collect();
    b.push(BigRational::one());
    StandardLp::feasibility(a, b, points.len())
        .expect("hull system is well formed")
        .solve()
        .is_feasible()
}

/// Feasible grid points together with the subset that are vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiobjectivePolytope {
    pub bounds: GridBounds,
    pub feasible: BTreeSet<Projection>,
    pub vertices: BTreeSet<Projection>,
}

/// Points of `feasible` not in the hull of the others.
pub fn extreme_points(feasible: &BTreeSet<Projection>) -> BTreeSet<Projection> {
    // A midpoint of two feasible points is never extreme, and dropping it
    // leaves the hull unchanged, so the LP test only sees the survivors.
    let d = feasible.first().map_or(0, Projection::len);
    let steps: Vec<Projection> = (0..d)
        .map(|_| [-1i64, 0, 1])
        .multi_cartesian_product()
        .filter(|e| e.iter().find(|&&v| v != 0) == Some(&1))
        .map(|e| Projection::from_i64(&e))
        .collect();
    let pts: Vec<&Projection> = feasible
        .iter()
        .filter(|y| !steps.iter().any(|e| feasible.contains(&y.add(e)) && feasible.contains(&y.sub(e))))
        .collect();
    let extreme: Vec<Option<&Projection>> = pts
        .par_iter()
        .enumerate()
        .map(|(idx, &y)| {
            let others = pts.iter().enumerate().filter(|&(o, _)| o != idx).map(|(_, &p)| p);
            (!hull_contains(others, y)).then_some(y)
        })
        .collect();
    extreme.into_iter().flatten().cloned().collect()
}

pub fn multiobjective_polytope(instance: &Instance) -> Result<MultiobjectivePolytope> {
    let bounds = grid_bounds(instance);
    let feasible = feasible_in_box(instance, &bounds)?;
    let vertices = extreme_points(&feasible);
    Ok(MultiobjectivePolytope { bounds, feasible, vertices })
}

/// Vertices of Π_w^n.
pub fn polytope_vertices(instance: &Instance) -> Result<BTreeSet<Projection>> {
    Ok(multiobjective_polytope(instance)?.vertices)
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of edge directions of Π^n, `½ Σ_{k=2}^n C(n,k)² k! (k-1)!`.
pub fn edge_direction_count(n: u64) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::TooFewVertices(n as usize));
    }
    let twice: BigUint = (2..=n)
        .map(|k| {
            let c = binomial(n, k);
            &c * &c * factorial(k) * factorial(k - 1)
        })
        .sum();
    Ok(twice / 2u32)
}

/// `(1/n)·C(n!, 2)`, as an exact rational.
pub fn edge_direction_lower_bound(n: u64) -> BigRational {
    let f = factorial(n);
    let pairs = if f.is_zero() { BigUint::zero() } else { &f * (&f - 1u32) / 2u32 };
    BigRational::new(BigInt::from(pairs), BigInt::from(n))
}

/// A circuit matrix of K_{n,n}: ±1 alternating along an even cycle, sign
/// normalized so the first nonzero entry in row-major order is `+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeDirection {
    n: usize,
    entries: Vec<i8>,
}

impl EdgeDirection {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn has_zero_line_sums(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).map(|j| self.entry(i, j) as i32).sum::<i32>() == 0)
            && (0..n).all(|j| (0..n).map(|i| self.entry(i, j) as i32).sum::<i32>() == 0)
    }

    /// Number of nonzero entries, `2k` for a `2k`-circuit.
    pub fn support(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }
}

/// Largest `n` accepted by [`brute_force_edge_directions`].
pub const EDGE_DIRECTION_MAX_N: usize = 4;

/// All circuit matrices of K_{n,n}, built by walking every even cycle
/// `r1 c1 r2 c2 … rk ck r1` and normalizing the sign.
pub fn brute_force_edge_directions(n: usize) -> Result<BTreeSet<EdgeDirection>> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if n > EDGE_DIRECTION_MAX_N {
        return Err(Error::BruteForceCap { n, cap: EDGE_DIRECTION_MAX_N });
    }
    let mut out = BTreeSet::new();
    for k in 2..=n {
        for rows in (0..n).permutations(k) {
            for cols in (0..n).permutations(k) {
                let mut entries = vec![0i8; n * n];
                for step in 0..k {
                    entries[rows[step] * n + cols[step]] = 1;
                    entries[rows[(step + 1) % k] * n + cols[step]] = -1;
                }
                if entries.iter().find(|&&e| e != 0) == Some(&-1) {
                    entries.iter_mut().for_each(|e| *e = -*e);
                }
                out.insert(EdgeDirection { n, entries });
            }
        }
    }
    Ok(out)
}
