//! Exact two-phase simplex over `{x >= 0 : Ax = b}`.
//!
//! Dense tableau over arbitrary-precision rationals with Bland's rule, so
//! every solve terminates and the returned vertex depends only on the input
//! (column order included). Redundant equality rows are detected after
//! phase one and dropped.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::objective::Sense;

/// `optimize c·x subject to Ax = b, x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardLp {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    c: Vec<BigRational>,
    sense: Sense,
}

impl StandardLp {
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>, c: Vec<BigRational>, sense: Sense) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
        }
        let q = c.len();
        if let Some(row) = a.iter().find(|row| row.len() != q) {
            return Err(Error::LengthMismatch { expected: q, found: row.len() });
        }
        Ok(Self { a, b, c, sense })
    }

    /// Feasibility problem with a zero objective.
    pub fn feasibility(a: Vec<Vec<BigRational>>, b: Vec<BigRational>, columns: usize) -> Result<Self> {
        Self::new(a, b, vec![BigRational::zero(); columns], Sense::Min)
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn columns(&self) -> usize {
        self.c.len()
    }

    pub fn a(&self) -> &[Vec<BigRational>] {
        &self.a
    }

    pub fn b(&self) -> &[BigRational] {
        &self.b
    }

    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub value: BigRational,
    /// Basic columns, ascending. Every other coordinate of `x` is zero.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(LpSolution),
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    reduced: Vec<BigRational>,
    // Negated objective value of the current basis.
    reduced_rhs: BigRational,
    basis: Vec<usize>,
}

struct Unbounded;

impl Tableau {
    fn price(&mut self, cost: &[BigRational]) {
        let width = self.rows.first().map_or(cost.len(), Vec::len);
        let mut reduced: Vec<BigRational> = (0..width).map(|j| cost.get(j).cloned().unwrap_or_default()).collect();
        let mut reduced_rhs = BigRational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = match cost.get(bv) {
                Some(cb) if !cb.is_zero() => cb,
                _ => continue,
            };
            for (r, t) in reduced.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *r -= cb * t;
                }
            }
            reduced_rhs -= cb * &self.rhs[i];
        }
        self.reduced = reduced;
        self.reduced_rhs = reduced_rhs;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&k| !pivot_row[k].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][j].clone();
            if f.is_zero() {
                continue;
            }
            for &k in &nonzero {
                self.rows[i][k] -= &f * &pivot_row[k];
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.reduced[j].clone();
        if !f.is_zero() {
            for &k in &nonzero {
                self.reduced[k] -= &f * &pivot_row[k];
            }
            self.reduced_rhs -= &f * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = j;
    }

    /// Minimizes over columns `0..allowed` with Bland's rule.
    fn run(&mut self, allowed: usize) -> std::result::Result<(), Unbounded> {
        loop {
            let Some(j) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let t = &self.rows[i][j];
                if !t.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / t;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Unbounded);
            };
            self.pivot(r, j);
        }
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.rows();
    let q = lp.columns();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, b)) in lp.a.iter().zip(&lp.b).enumerate() {
        let flip = b.is_negative();
        let mut r: Vec<BigRational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.resize(q + m, BigRational::zero());
        r[q + i] = BigRational::one();
        rows.push(r);
        rhs.push(if flip { -b } else { b.clone() });
    }
    let mut tab = Tableau {
        rows,
        rhs,
        reduced: Vec::new(),
        reduced_rhs: BigRational::zero(),
        basis: (q..q + m).collect(),
    };

    // Phase one: minimize the sum of artificials.
    let mut phase_one = vec![BigRational::zero(); q + m];
    for c in &mut phase_one[q..] {
        *c = BigRational::one();
    }
    tab.price(&phase_one);
    if tab.run(q + m).is_err() {
        unreachable!("phase one is bounded below by zero");
    }
    if !tab.reduced_rhs.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; rows where that is impossible are
    // linear combinations of the others.
    let mut redundant = Vec::new();
    for r in 0..m {
        if tab.basis[r] < q {
            continue;
        }
        match (0..q).find(|&j| !tab.rows[r][j].is_zero()) {
            Some(j) => tab.pivot(r, j),
            None => redundant.push(r),
        }
    }
    for &r in redundant.iter().rev() {
        tab.rows.remove(r);
        tab.rhs.remove(r);
        tab.basis.remove(r);
    }
    for row in &mut tab.rows {
        row.truncate(q);
    }

    let cost: Vec<BigRational> = match lp.sense {
        Sense::Min => lp.c.clone(),
        Sense::Max => lp.c.iter().map(|v| -v).collect(),
    };
    tab.price(&cost);
    if tab.run(q).is_err() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); q];
    for (i, &bv) in tab.basis.iter().enumerate() {
        x[bv] = tab.rhs[i].clone();
    }
    let value = lp.c.iter().zip(&x).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum();
    let mut basis = tab.basis;
    basis.sort_unstable();
    LpOutcome::Optimal(LpSolution { x, value, basis })
}
