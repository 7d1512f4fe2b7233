//! Instances built from the subset-sum and 3-dimensional-matching
//! reductions, and a decision procedure for "is there a perfect matching
//! with `w^k(M) = u_k` for every `k`".

use num_bigint::BigInt;

use crate::brute::{brute_force_projections, DEFAULT_BRUTE_FORCE_CAP};
use crate::error::{Error, Result};
use crate::instance::{Instance, Projection};
use crate::polytope::grid_bounds;
use crate::randomized::{support, ASubstitution, RngHandle, DEFAULT_EVAL_CAP};

/// Prescribed values `u_1..u_d`.
pub type TargetVector = Projection;

/// `n = 2m`, `d = 1`, `w_{ij} = a_i` for `i, j <= m` and zero elsewhere. A
/// matching with `w(M) = a_0` exists iff some subset of `a_1..a_m` sums to
/// `a_0`: rows `i <= m` matched into the first `m` columns pick `a_i`, and
/// the rest land in the zero block.
pub fn subset_sum_instance(target: i64, items: &[i64]) -> Result<(Instance, TargetVector)> {
    let m = items.len();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = 2 * m;
    let w: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i < m && j < m { items[i] } else { 0 }).collect())
        .collect();
    Ok((Instance::from_i64(n, 1, &[w])?, Projection::from_i64(&[target])))
}

/// `d = n`, `w^k_{ij} = x_{ijk}`, all targets one.
///
/// The two decisions coincide when every cell `(i, j)` has at most one `k`
/// with `x_{ijk} = 1`. Otherwise they can differ either way: one matched
/// edge may cover two layers while another covers none (matching YES, no
/// 3DM), and a 3DM's edges may carry extra layers that push some
/// `w^k(M)` above one (3DM exists, matching NO).
pub fn three_dm_instance(x: &[Vec<Vec<bool>>]) -> Result<(Instance, TargetVector)> {
    let n = x.len();
    if x.iter().any(|plane| plane.len() != n || plane.iter().any(|row| row.len() != n)) {
        return Err(Error::MatrixShape { index: 0, n });
    }
    let weights: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| x[i][j][k] as i64).collect()).collect())
        .collect();
    Ok((Instance::from_i64(n, n, &weights)?, Projection(vec![BigInt::from(1); n])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMode {
    /// Enumerate all matchings.
    Exact,
    /// One random support computation with `s = 2n²`.
    Randomized { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    /// Target absent from a random support; wrong with probability at most
    /// `n/s`.
    ProbablyNo,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
            Decision::ProbablyNo => "PROBABLY_NO",
        }
    }
}

pub fn specified_decision(instance: &Instance, target: &TargetVector, mode: DecisionMode) -> Result<Decision> {
    if target.len() != instance.d() {
        return Err(Error::LengthMismatch { expected: instance.d(), found: target.len() });
    }
    // Enumeration needs no box check; the LPs behind it cost more than the
    // enumeration itself on small instances.
    if mode == DecisionMode::Exact && instance.n() <= DEFAULT_BRUTE_FORCE_CAP {
        let ys = brute_force_projections(instance)?;
        return Ok(if ys.contains(target) { Decision::Yes } else { Decision::No });
    }
    if !grid_bounds(instance).contains(target) {
        return Ok(Decision::No);
    }
    match mode {
        DecisionMode::Exact => Err(Error::BruteForceCap { n: instance.n(), cap: DEFAULT_BRUTE_FORCE_CAP }),
        DecisionMode::Randomized { seed } => {
            let min = instance.min_weight();
            let (inst, target) = if min < BigInt::from(0) {
                let shift = -min;
                let offset = &shift * BigInt::from(instance.n());
                (instance.shifted(&shift), target.offset_all(&offset))
            } else {
                (instance.clone(), target.clone())
            };
            let n = inst.n() as u64;
            let mut rng = RngHandle::from_seed(seed);
            let a = ASubstitution::random(inst.n(), 2 * n * n, &mut rng);
            let sup = support(&inst, &a, DEFAULT_EVAL_CAP)?;
            Ok(if sup.points.contains(&target) { Decision::Yes } else { Decision::ProbablyNo })
        }
    }
}

/// Direct check for a 3-dimensional matching: permutations `σ, τ` with
/// `x_{i,σ(i),τ(i)} = 1` for every `i`.
pub fn has_three_dimensional_matching(x: &[Vec<Vec<bool>>]) -> bool {
    use itertools::Itertools;
    let n = x.len();
    (0..n).permutations(n).any(|sigma| {
        (0..n).permutations(n).any(|tau| (0..n).all(|i| x[i][sigma[i]][tau[i]]))
    })
}
