//! Exhaustive reference solvers. Everything else is checked against these.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{Instance, Matching, Projection};
use crate::objective::{Objective, OracleCounter};

/// Largest `n` the enumerators accept by default (8! = 40320 matchings).
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 8;

/// All perfect matchings of K_{n,n} in lexicographic order of `σ`.
pub fn matchings(n: usize) -> impl Iterator<Item = Matching> {
    (0..n).permutations(n).map(|sigma| Matching::new(sigma).expect("itertools yields permutations"))
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::BruteForceCap { n, cap })
    } else {
        Ok(())
    }
}

/// Optimal matching by enumeration. Ties go to the lexicographically
/// smallest `σ`.
pub fn brute_force_solve(
    instance: &Instance,
    objective: &Objective,
    counter: &OracleCounter,
) -> Result<(Matching, Projection)> {
    brute_force_solve_capped(instance, objective, counter, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_solve_capped(
    instance: &Instance,
    objective: &Objective,
    counter: &OracleCounter,
    cap: usize,
) -> Result<(Matching, Projection)> {
    check_cap(instance.n(), cap)?;
    let mut best: Option<(Matching, Projection)> = None;
    for m in matchings(instance.n()) {
        let y = instance.project(&m)?;
        let better = match &best {
            None => true,
            Some((_, by)) => objective.prefer(&y, by, counter)? == Ordering::Greater,
        };
        if better {
            best = Some((m, y));
        }
    }
    Ok(best.expect("K_{n,n} has at least one perfect matching"))
}

/// The exact set `{w·x : x a permutation matrix}`.
pub fn brute_force_projections(instance: &Instance) -> Result<BTreeSet<Projection>> {
    brute_force_projections_capped(instance, DEFAULT_BRUTE_FORCE_CAP)
}

/// Same set as projecting every matching, computed by dynamic programming
/// over the set of used columns: row `i = |mask|` extends each partial sum
/// in `reach[mask]` by one unused column. `O(2^n · n · |Y|)` work instead
/// of `n!`.
pub fn brute_force_projections_capped(instance: &Instance, cap: usize) -> Result<BTreeSet<Projection>> {
    let n = instance.n();
    check_cap(n, cap)?;
    let d = instance.d();
    let full = (1usize << n) - 1;
    let mut reach: Vec<BTreeSet<Projection>> = vec![BTreeSet::new(); full + 1];
    reach[0].insert(Projection::zero(d));
    for mask in 0..full {
        if reach[mask].is_empty() {
            continue;
        }
        let i = mask.count_ones() as usize;
        let current = std::mem::take(&mut reach[mask]);
        for j in (0..n).filter(|&j| mask & (1 << j) == 0) {
            let step = Projection((0..d).map(|k| instance.weight(k, i, j).clone()).collect());
            let next = &mut reach[mask | (1 << j)];
            next.extend(current.iter().map(|y| y.add(&step)));
        }
    }
    Ok(std::mem::take(&mut reach[full]))
}
