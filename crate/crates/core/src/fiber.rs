//! Fibers `{x ∈ Π^n : w^k·x = y_k for all k}` of points `y ∈ Z^d`.
//!
//! Matrix variables are ordered row-major, so the vertex returned by
//! [`fiber_vertex`] is fixed by the simplex pivot rule.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, Matching, Projection};
use crate::simplex::StandardLp;

/// Largest `n` and `d` accepted by [`enumerate_fiber_vertices`].
pub const ENUMERATION_MAX_N: usize = 4;
pub const ENUMERATION_MAX_D: usize = 3;

/// A bistochastic matrix, row-major, with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberVertex {
    n: usize,
    x: Vec<BigRational>,
}

impl FiberVertex {
    pub fn new(n: usize, x: Vec<BigRational>) -> Self {
        assert_eq!(x.len(), n * n);
        Self { n, x }
    }

    /// From a row-major matrix of `numerator/denominator` pairs.
    pub fn from_fractions(n: usize, entries: &[(i64, i64)]) -> Self {
        let x = entries
            .iter()
            .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
        Self::new(n, x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.x
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.x[i * self.n + j]
    }

    pub fn is_integral(&self) -> bool {
        self.x.iter().all(BigRational::is_integer)
    }

    /// The matching this vertex represents, if it is a permutation matrix.
    pub fn as_matching(&self) -> Option<Matching> {
        let mut sigma = Vec::with_capacity(self.n);
        for row in self.x.chunks(self.n.max(1)).take(self.n) {
            if !row.iter().all(|v| v.is_zero() || v.is_one()) {
                return None;
            }
            let ones: Vec<usize> = row.iter().positions(One::is_one).collect();
            if ones.len() != 1 {
                return None;
            }
            sigma.push(ones[0]);
        }
        Matching::new(sigma).ok()
    }

    /// Row and column sums are one and every entry is nonnegative.
    pub fn is_bistochastic(&self) -> bool {
        let n = self.n;
        let one = BigRational::one();
        self.x.iter().all(|v| !v.is_negative())
            && (0..n).all(|i| (0..n).map(|j| self.entry(i, j)).sum::<BigRational>() == one)
            && (0..n).all(|j| (0..n).map(|i| self.entry(i, j)).sum::<BigRational>() == one)
    }

    /// `w·x` with exact rational coordinates.
    pub fn project(&self, instance: &Instance) -> Vec<BigRational> {
        instance
            .matrices()
            .map(|w| w.iter().zip(&self.x).map(|(a, b)| BigRational::from(a.clone()) * b).sum())
            .collect()
    }
}

impl fmt::Display for FiberVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.x.chunks(self.n.max(1)) {
            writeln!(f, "{}", row.iter().map(ToString::to_string).join(" "))?;
        }
        Ok(())
    }
}

/// Row and column sum constraints of Π^n over row-major variables.
pub(crate) fn birkhoff_system(n: usize) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut a = Vec::with_capacity(2 * n);
    for i in 0..n {
        a.push((0..n * n).map(|v| if v / n == i { one.clone() } else { zero.clone() }).collect());
    }
    for j in 0..n {
        a.push((0..n * n).map(|v| if v % n == j { one.clone() } else { zero.clone() }).collect());
    }
    (a, vec![one; 2 * n])
}

/// Equality system of the fiber of `y`: Birkhoff rows followed by one row per
/// weight function.
pub fn fiber_system(instance: &Instance, y: &Projection) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    if y.len() != instance.d() {
        return Err(Error::LengthMismatch { expected: instance.d(), found: y.len() });
    }
    let (mut a, mut b) = birkhoff_system(instance.n());
    for (w, yk) in instance.matrices().zip(y.coords()) {
        a.push(w.iter().cloned().map(BigRational::from).collect());
        b.push(yk.clone().into());
    }
    Ok((a, b))
}

/// A vertex of the fiber of `y`, or `None` when the fiber is empty.
pub fn fiber_vertex(instance: &Instance, y: &Projection) -> Result<Option<FiberVertex>> {
    let (a, b) = fiber_system(instance, y)?;
    let n = instance.n();
    let lp = StandardLp::feasibility(a, b, n * n)?;
    Ok(lp.solve().optimal().map(|sol| FiberVertex::new(n, sol.x)))
}

/// A matching projecting exactly onto `y`, recovered from a fiber vertex.
///
/// Guaranteed to succeed when `y` is a vertex of the multiobjective
/// polytope. Otherwise the LP may land on a fractional vertex, which is
/// reported rather than rounded.
pub fn fiber_permutation(instance: &Instance, y: &Projection) -> Result<Matching> {
    match fiber_vertex(instance, y)? {
        None => Err(Error::FiberEmpty(y.to_string())),
        Some(v) => v.as_matching().ok_or_else(|| Error::NonIntegralVertex(y.to_string())),
    }
}

/// Reduces `[A | b]` to independent rows. `None` if inconsistent.
fn independent_rows(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let mut rows: Vec<(Vec<BigRational>, BigRational)> =
        a.iter().cloned().zip(b.iter().cloned()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i].0[c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (prow, prhs) = rows[rank].clone();
        for i in 0..rows.len() {
            if i == rank || rows[i].0[c].is_zero() {
                continue;
            }
            let f = &rows[i].0[c] / &prow[c];
            for k in c..cols {
                let delta = &f * &prow[k];
                rows[i].0[k] -= delta;
            }
            rows[i].1 -= &f * &prhs;
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    rows.truncate(rank);
    Some(rows.into_iter().unzip())
}

/// Solves the square system on `columns`; `None` when singular.
fn basic_solution(a: &[Vec<BigRational>], b: &[BigRational], columns: &[usize]) -> Option<Vec<BigRational>> {
    let r = columns.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v: Vec<BigRational> = columns.iter().map(|&c| row[c].clone()).collect();
            v.push(rhs.clone());
            v
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for k in c..=r {
            m[c][k] /= &pivot;
        }
        for i in 0..r {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in c..=r {
                let delta = &f * &m[c][k];
                m[i][k] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[r].clone()).collect())
}

/// Every vertex of the fiber of `y`, by enumerating bases of its equality
/// system and keeping the nonnegative basic solutions.
pub fn enumerate_fiber_vertices(instance: &Instance, y: &Projection) -> Result<BTreeSet<FiberVertex>> {
    let (n, d) = (instance.n(), instance.d());
    if n > ENUMERATION_MAX_N || d > ENUMERATION_MAX_D {
        return Err(Error::EnumerationBounds { n, d, max_n: ENUMERATION_MAX_N, max_d: ENUMERATION_MAX_D });
    }
    let (a, b) = fiber_system(instance, y)?;
    let Some((a, b)) = independent_rows(&a, &b) else {
        return Ok(BTreeSet::new());
    };
    let bases: Vec<Vec<usize>> = (0..n * n).combinations(a.len()).collect();
    let vertices = bases
        .par_iter()
        .filter_map(|cols| {
            let xb = basic_solution(&a, &b, cols)?;
            if xb.iter().any(Signed::is_negative) {
                return None;
            }
            let mut x = vec![BigRational::zero(); n * n];
            for (&c, v) in cols.iter().zip(xb) {
                x[c] = v;
            }
            Some(FiberVertex::new(n, x))
        })
        .collect::<Vec<_>>();
    Ok(vertices.into_iter().collect())
}
