//! Problem data: weight matrices on K_{n,n}, perfect matchings and their
//! images in Z^d.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::objective::Objective;

/// `d` integer weight matrices on the edges of K_{n,n}.
///
/// Matrices are stored row-major; `weight(k, i, j)` is the weight of edge
/// `(i, j)` under the `k`-th weight function. All indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    d: usize,
    weights: Vec<Vec<BigInt>>,
}

impl Instance {
    /// Validates dimensions and builds an instance. `weights[k][i][j]` is
    /// the weight of edge `(i, j)` under function `k`.
    pub fn new(n: usize, d: usize, weights: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        if n < 1 {
            return Err(Error::EmptyGraph);
        }
        if d < 1 {
            return Err(Error::NoWeights);
        }
        if weights.len() != d {
            return Err(Error::WeightCount { expected: d, found: weights.len() });
        }
        let mut flat = Vec::with_capacity(d);
        for (index, matrix) in weights.into_iter().enumerate() {
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(Error::MatrixShape { index, n });
            }
            flat.push(matrix.into_iter().flatten().collect());
        }
        Ok(Self { n, d, weights: flat })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(n: usize, d: usize, weights: &[Vec<Vec<i64>>]) -> Result<Self> {
        let big = weights
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .collect();
        Self::new(n, d, big)
    }

    /// Builds an instance without the `n >= 1` check. Restriction of a full
    /// matching legitimately produces the empty graph.
    pub(crate) fn from_flat(n: usize, d: usize, weights: Vec<Vec<BigInt>>) -> Self {
        debug_assert_eq!(weights.len(), d);
        debug_assert!(weights.iter().all(|w| w.len() == n * n));
        Self { n, d, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weight(&self, k: usize, i: usize, j: usize) -> &BigInt {
        &self.weights[k][i * self.n + j]
    }

    /// Row-major entries of the `k`-th weight matrix.
    pub fn matrix(&self, k: usize) -> &[BigInt] {
        &self.weights[k]
    }

    pub fn matrices(&self) -> impl Iterator<Item = &[BigInt]> {
        self.weights.iter().map(Vec::as_slice)
    }

    /// Nested `[k][i][j]` copy of the weights.
    pub fn to_nested(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.weights
            .iter()
            .map(|w| w.chunks(self.n.max(1)).map(<[BigInt]>::to_vec).collect())
            .collect()
    }

    pub fn max_abs_weight(&self) -> BigInt {
        self.weights.iter().flatten().map(BigInt::abs).max().unwrap_or_default()
    }

    pub fn min_weight(&self) -> BigInt {
        self.weights.iter().flatten().min().cloned().unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().flatten().all(|w| !w.is_negative())
    }

    /// Image `w·x` of a matching, `y_k = Σ_i w^k_{i, σ(i)}`.
    pub fn project(&self, matching: &Matching) -> Result<Projection> {
        if matching.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: matching.len() });
        }
        Ok(self.project_edges(matching.edges()))
    }

    /// Total weight vector of an arbitrary edge set.
    pub fn project_edges(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> Projection {
        let mut y = vec![BigInt::zero(); self.d];
        for (i, j) in edges {
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += self.weight(k, i, j);
            }
        }
        Projection(y)
    }

    /// Shifts every weight by `v`.
    pub(crate) fn shifted(&self, v: &BigInt) -> Self {
        let weights = self
            .weights
            .iter()
            .map(|w| w.iter().map(|x| x + v).collect())
            .collect();
        Self::from_flat(self.n, self.d, weights)
    }
}

/// A perfect matching of K_{n,n} stored as the permutation `σ`, where row
/// `i` is matched to column `σ(i)`. 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &c in &sigma {
            if c >= n {
                return Err(Error::NotAPermutation { n, detail: format!("column {c} out of range") });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::NotAPermutation { n, detail: format!("column {c} repeated") });
            }
        }
        Ok(Self(sigma))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// From 1-based column indices, as written in files.
    pub fn from_one_based(columns: &[usize]) -> Result<Self> {
        let n = columns.len();
        let sigma = columns
            .iter()
            .map(|&c| {
                c.checked_sub(1)
                    .ok_or_else(|| Error::NotAPermutation { n, detail: "column 0 in 1-based input".into() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sigma)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.0
    }

    pub fn column(&self, row: usize) -> usize {
        self.0[row]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied().enumerate()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }

    /// Parity of the permutation, `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        let n = self.0.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut at = start;
            while !visited[at] {
                visited[at] = true;
                at = self.0[at];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The 0/1 permutation matrix, row-major.
    pub fn to_matrix(&self) -> Vec<u8> {
        let n = self.0.len();
        let mut x = vec![0u8; n * n];
        for (i, j) in self.edges() {
            x[i * n + j] = 1;
        }
        x
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, (i, j)) in self.edges().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", i + 1, j + 1)?;
        }
        write!(f, "}}")
    }
}

/// A point of Z^d. Ordered lexicographically, which is the tie-break used
/// by every solver.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Projection(pub Vec<BigInt>);

impl Projection {
    pub fn zero(d: usize) -> Self {
        Self(vec![BigInt::zero(); d])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    /// Coordinatewise sum. Lengths must agree.
    pub fn add(&self, other: &Projection) -> Projection {
        debug_assert_eq!(self.len(), other.len());
        Projection(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Projection) -> Projection {
        debug_assert_eq!(self.len(), other.len());
        Projection(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn offset_all(&self, delta: &BigInt) -> Projection {
        Projection(self.0.iter().map(|a| a + delta).collect())
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Result of [`normalize_nonnegative`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub instance: Instance,
    pub objective: Objective,
    /// Amount added to every weight.
    pub shift: BigInt,
}

impl Normalized {
    /// Offset `n·v` carried by every coordinate of every projection.
    pub fn projection_offset(&self) -> BigInt {
        &self.shift * BigInt::from(self.instance.n())
    }
}

/// Adds `v = max(0, -min w)` to every weight and remaps the objective so it
/// compares `y` the way the original compares `y - n·v·1`. Every matching
/// has exactly `n` edges, so optima correspond one to one.
pub fn normalize_nonnegative(instance: &Instance, objective: &Objective) -> Normalized {
    let min = instance.min_weight();
    if !min.is_negative() {
        return Normalized { instance: instance.clone(), objective: objective.clone(), shift: BigInt::zero() };
    }
    let shift = -min;
    let back = -(&shift * BigInt::from(instance.n()));
    Normalized {
        instance: instance.shifted(&shift),
        objective: objective.shifted(&Projection(vec![back; instance.d()])),
        shift,
    }
}
