//! Randomized optimization of arbitrary objectives through the determinant
//! of a weighted symbolic matrix.
//!
//! With `A_{ij} = a_{ij} Π_k b_k^{w^k_{ij}}` we have
//! `det A = Σ_y g_y(a) b^y` where `g_y` sums the signed monomials of the
//! permutations projecting to `y`. Substituting random integers for `a`
//! and `b_k = t^{(u+1)^k}` turns `det A` into a univariate polynomial in `t`
//! whose nonzero coefficients reveal the support `Ŷ ⊆ Y`. Each `y ∈ Y`
//! survives with probability at least `1 - n/s`.

mod det;
mod interp;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use det::bareiss_determinant;
pub use interp::{evaluate, interpolate_integer};

use crate::error::{Error, Result};
use crate::instance::{normalize_nonnegative, Instance, Matching, Projection};
use crate::objective::{Objective, OracleCounter};

/// Default cap on the number of interpolation nodes `(u+1)^d`.
pub const DEFAULT_EVAL_CAP: usize = 100_000;

/// Seeded source of uniform draws.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn from_seed(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `1..=s`.
    pub fn draw(&mut self, s: u64) -> u64 {
        self.rng.gen_range(1..=s)
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Integer values substituted for the variables `a_{ij}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASubstitution {
    n: usize,
    s: u64,
    a: Vec<u64>,
}

impl ASubstitution {
    pub fn new(n: usize, s: u64, a: Vec<u64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, found: a.len() });
        }
        if a.iter().any(|&v| v < 1 || v > s) {
            return Err(Error::SubstitutionRange { s });
        }
        Ok(Self { n, s, a })
    }

    /// Independent uniform draws from `1..=s`, row-major.
    pub fn random(n: usize, s: u64, rng: &mut RngHandle) -> Self {
        let s = s.max(1);
        let a = (0..n * n).map(|_| rng.draw(s)).collect();
        Self { n, s, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }
}

/// The substitution `b_k = t^{(u+1)^k}` and the exponent bijection
/// `y ↦ e(y) = Σ_k y_k (u+1)^k` between `{0..u}^d` and `0..(u+1)^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    u: u64,
    d: usize,
    nodes: usize,
    cells: Vec<u32>,
}

impl Encoding {
    /// `u = n · max w`. Fails when `(u+1)^d` exceeds `cap`.
    pub fn new(instance: &Instance, cap: usize) -> Result<Self> {
        if !instance.is_nonnegative() {
            return Err(Error::NegativeWeights);
        }
        let d = instance.d();
        let u_big = instance.max_abs_weight() * BigInt::from(instance.n());
        let nodes_big = num_traits::pow(&u_big + 1u32, d);
        let guard = || Error::ScaleGuard { required: nodes_big.to_string(), cap };
        let nodes = nodes_big.to_usize().filter(|&v| v <= cap).ok_or_else(guard)?;
        let u = u_big.to_u64().ok_or_else(guard)?;
        let n = instance.n();
        let mut cells = vec![0u32; n * n];
        for (idx, cell) in cells.iter_mut().enumerate() {
            let (i, j) = (idx / n, idx % n);
            let mut e = 0u64;
            let mut place = 1u64;
            for k in 0..d {
                e += instance.weight(k, i, j).to_u64().expect("bounded by u") * place;
                place *= u + 1;
            }
            *cell = e as u32;
        }
        Ok(Self { u, d, nodes, cells })
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    /// Number of interpolation nodes, `(u+1)^d`.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn encode(&self, y: &Projection) -> Option<usize> {
        let base = self.u + 1;
        let mut e = 0u64;
        let mut place = 1u64;
        for v in y.coords() {
            let v = v.to_u64().filter(|&v| v <= self.u)?;
            e += v * place;
            place *= base;
        }
        Some(e as usize)
    }

    pub fn decode(&self, mut e: usize) -> Projection {
        let base = (self.u + 1) as usize;
        let mut y = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            y.push(BigInt::from(e % base));
            e /= base;
        }
        Projection(y)
    }
}

fn substituted_matrix(encoding: &Encoding, a: &ASubstitution, t: u64) -> Vec<Vec<BigInt>> {
    let n = a.n();
    let t = BigInt::from(t);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(a.get(i, j)) * num_traits::pow(t.clone(), encoding.cells[i * n + j] as usize))
                .collect()
        })
        .collect()
}

/// `det A(t)` with `A(t)_{ij} = a_{ij} · t^{e(w_{ij})}`.
pub fn det_at(instance: &Instance, a: &ASubstitution, t: u64) -> Result<BigInt> {
    let encoding = Encoding::new(instance, usize::MAX)?;
    det_at_encoded(&encoding, a, t)
}

fn det_at_encoded(encoding: &Encoding, a: &ASubstitution, t: u64) -> Result<BigInt> {
    if a.n() * a.n() != encoding.cells.len() {
        return Err(Error::LengthMismatch { expected: encoding.cells.len(), found: a.n() * a.n() });
    }
    Ok(bareiss_determinant(substituted_matrix(encoding, a, t)))
}

/// Support `Ŷ` of `det A` under a fixed substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    pub points: BTreeSet<Projection>,
    /// Nonzero coefficients `g_y(a)`.
    pub coefficients: BTreeMap<Projection, BigInt>,
    pub encoding: Encoding,
}

impl SupportSet {
    pub fn u(&self) -> u64 {
        self.encoding.u()
    }

    /// `Σ_y g_y t^{e(y)}`, which must equal `det A(t)`.
    pub fn evaluate(&self, t: u64) -> BigInt {
        let t = BigInt::from(t);
        self.coefficients
            .iter()
            .map(|(y, g)| g * num_traits::pow(t.clone(), self.encoding.encode(y).expect("support lies in the grid")))
            .sum()
    }
}

/// Recovers every `g_y(a)` by evaluating `det A(t)` at `t = 1..(u+1)^d` and
/// interpolating. Weights must be nonnegative.
pub fn support(instance: &Instance, a: &ASubstitution, cap: usize) -> Result<SupportSet> {
    let encoding = Encoding::new(instance, cap)?;
    let values = (1..=encoding.nodes() as u64)
        .into_par_iter()
        .map(|t| det_at_encoded(&encoding, a, t))
        .collect::<Result<Vec<_>>>()?;
    let coefficients = interpolate_integer(&values).expect("det A(t) has integer coefficients");
    let coefficients: BTreeMap<Projection, BigInt> = coefficients
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(e, g)| (encoding.decode(e), g))
        .collect();
    Ok(SupportSet { points: coefficients.keys().cloned().collect(), coefficients, encoding })
}

/// Knobs for the randomized solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizedConfig {
    /// Cap on interpolation nodes per support computation.
    pub eval_cap: usize,
    /// Range `s` for a whole-instance estimate; `2n²` when unset.
    pub value_range: Option<u64>,
    /// Range `s` inside the self-reduction; `2mn` when unset.
    pub step_range: Option<u64>,
}

impl Default for RandomizedConfig {
    fn default() -> Self {
        Self { eval_cap: DEFAULT_EVAL_CAP, value_range: None, step_range: None }
    }
}

/// Oracle-best point of a freshly drawn support, in the instance's own
/// coordinates. Negative weights are shifted away first.
pub fn estimate_with_range(
    instance: &Instance,
    objective: &Objective,
    rng: &mut RngHandle,
    s: u64,
    cap: usize,
    counter: &OracleCounter,
) -> Result<Projection> {
    let norm = normalize_nonnegative(instance, objective);
    let a = ASubstitution::random(instance.n(), s, rng);
    let sup = support(&norm.instance, &a, cap)?;
    let best = norm.objective.best(sup.points.iter(), counter)?.ok_or(Error::EmptySupport)?;
    Ok(best.offset_all(&-norm.projection_offset()))
}

/// Estimate of the optimal projection with `s = 2n²`; correct with
/// probability at least `1 - 1/(2n)`.
pub fn optimum_value_estimate(
    instance: &Instance,
    objective: &Objective,
    rng: &mut RngHandle,
    config: &RandomizedConfig,
    counter: &OracleCounter,
) -> Result<Projection> {
    let n = instance.n() as u64;
    let s = config.value_range.unwrap_or(2 * n * n);
    estimate_with_range(instance, objective, rng, s, config.eval_cap, counter)
}

/// Sub-problem left after fixing a partial matching.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub instance: Instance,
    /// Compares `y` the way the original compares `y + w(partial)`.
    pub objective: Objective,
    /// Original indices of the remaining rows and columns.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub fixed_weight: Projection,
}

pub fn restrict(instance: &Instance, objective: &Objective, partial: &[(usize, usize)]) -> Result<Restriction> {
    let n = instance.n();
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; n];
    for &(i, j) in partial {
        if i >= n || j >= n {
            return Err(Error::NotAMatching(format!("edge ({i},{j}) outside K_{{{n},{n}}}")));
        }
        if std::mem::replace(&mut row_used[i], true) || std::mem::replace(&mut col_used[j], true) {
            return Err(Error::NotAMatching(format!("edge ({i},{j}) shares an endpoint")));
        }
    }
    let rows: Vec<usize> = (0..n).filter(|&i| !row_used[i]).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| !col_used[j]).collect();
    let weights = instance
        .matrices()
        .map(|w| rows.iter().flat_map(|&i| cols.iter().map(move |&j| w[i * n + j].clone())).collect())
        .collect();
    let fixed_weight = instance.project_edges(partial.iter().copied());
    Ok(Restriction {
        instance: Instance::from_flat(rows.len(), instance.d(), weights),
        objective: objective.shifted(&fixed_weight),
        rows,
        cols,
        fixed_weight,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedReport {
    pub matching: Matching,
    pub projection: Projection,
    pub oracle_queries: u64,
    pub trials: usize,
    pub seed: u64,
}

/// One pass of the greedy self-reduction: row by row, fix the smallest
/// column whose extension has the best estimated completion.
fn greedy_trial(
    instance: &Instance,
    objective: &Objective,
    rng: &mut RngHandle,
    config: &RandomizedConfig,
    counter: &OracleCounter,
) -> Result<Matching> {
    let n = instance.n();
    let mut partial: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let remaining = (n - i - 1) as u64;
        let s = config.step_range.unwrap_or(2 * remaining * n as u64);
        let mut best: Option<(usize, Projection)> = None;
        for j in (0..n).filter(|&j| !used[j]) {
            partial.push((i, j));
            let sub = restrict(instance, objective, &partial)?;
            partial.pop();
            let completion = estimate_with_range(&sub.instance, &sub.objective, rng, s, config.eval_cap, counter)?;
            let value = completion.add(&sub.fixed_weight);
            let better = match &best {
                None => true,
                Some((_, bv)) => objective.prefer(&value, bv, counter)? == Ordering::Greater,
            };
            if better {
                best = Some((j, value));
            }
        }
        let (j, _) = best.expect("an unmatched column remains");
        used[j] = true;
        partial.push((i, j));
    }
    Matching::new(partial.into_iter().map(|(_, j)| j).collect())
}

/// Repeats the greedy self-reduction `trials` times with per-trial seeds
/// drawn from `rng` and returns the best matching found (earliest trial
/// among ties). Each trial is optimal with probability at least ½.
pub fn randomized_solve(
    instance: &Instance,
    objective: &Objective,
    rng: &mut RngHandle,
    trials: usize,
    config: &RandomizedConfig,
) -> Result<RandomizedReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let counter = OracleCounter::new();
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_seed()).collect();
    let outcomes = seeds
        .par_iter()
        .map(|&seed| {
            let mut trial_rng = RngHandle::from_seed(seed);
            let m = greedy_trial(instance, objective, &mut trial_rng, config, &counter)?;
            let y = instance.project(&m)?;
            Ok((m, y))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(Matching, Projection)> = None;
    for (m, y) in outcomes {
        let better = match &best {
            None => true,
            Some((_, by)) => objective.prefer(&y, by, &counter)? == Ordering::Greater,
        };
        if better {
            best = Some((m, y));
        }
    }
    let (matching, projection) = best.expect("trials >= 1");
    Ok(RandomizedReport { matching, projection, oracle_queries: counter.queries(), trials, seed: rng.seed() })
}
