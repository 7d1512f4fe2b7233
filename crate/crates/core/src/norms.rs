//! Approximate lp-norm minimization and maximization for nonnegative
//! weights. Guarantees are stated in powered form so they can be checked
//! in exact integers.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fiber::fiber_permutation;
use crate::instance::{Instance, Matching, Projection};
use crate::objective::{Objective, OracleCounter, PNorm, Sense};
use crate::polytope::{optimize_over_birkhoff, polytope_vertices};
use crate::fiber::FiberVertex;

/// Approximation guarantee attached to a norm solve, with `OPT` the optimal
/// norm and `out` the norm of the returned matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioGuarantee {
    /// `out == OPT`.
    Exact,
    /// Minimization: `out <= d·OPT`.
    Linear { d: usize },
    /// Minimization with p = 2: `out² <= d·OPT²`.
    Squared { d: usize },
    /// Maximization with finite p: `OPT^p <= d·out^p`.
    Powered { d: usize, p: u32 },
}

impl fmt::Display for RatioGuarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioGuarantee::Exact => f.write_str("exact"),
            RatioGuarantee::Linear { d } => write!(f, "out <= {d}*OPT"),
            RatioGuarantee::Squared { d } => write!(f, "out^2 <= {d}*OPT^2"),
            RatioGuarantee::Powered { d, p } => write!(f, "OPT^{p} <= {d}*out^{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormSolveReport {
    pub matching: Matching,
    pub projection: Projection,
    pub p: PNorm,
    pub guaranteed_ratio: RatioGuarantee,
    pub oracle_queries: u64,
}

fn require_nonnegative(instance: &Instance) -> Result<()> {
    if instance.is_nonnegative() {
        Ok(())
    } else {
        Err(Error::NegativeWeights)
    }
}

/// Returns the matching over the vertex of `Π_w^n` with the smallest norm.
/// A `d`-approximation for every p and a `√d`-approximation for p = 2.
pub fn min_norm(instance: &Instance, p: PNorm) -> Result<NormSolveReport> {
    require_nonnegative(instance)?;
    let counter = OracleCounter::new();
    let objective = Objective::lp_norm(p, Sense::Min);
    let vertices = polytope_vertices(instance)?;
    let best = objective.best(vertices.iter(), &counter)?.expect("Π_w^n has a vertex");
    let matching = fiber_permutation(instance, best)?;
    let d = instance.d();
    let guaranteed_ratio = match p {
        _ if d == 1 => RatioGuarantee::Exact,
        PNorm::Finite(2) => RatioGuarantee::Squared { d },
        _ => RatioGuarantee::Linear { d },
    };
    Ok(NormSolveReport {
        projection: instance.project(&matching)?,
        matching,
        p,
        guaranteed_ratio,
        oracle_queries: counter.queries(),
    })
}

/// Maximizes each `w^k·x` over Π^n separately and keeps the candidate with
/// the largest norm. A `d^{1/p}`-approximation; exact for p = ∞.
pub fn max_norm(instance: &Instance, p: PNorm) -> Result<NormSolveReport> {
    let (report, _) = max_norm_with_candidates(instance, p)?;
    Ok(report)
}

/// [`max_norm`] together with the `d` LP vertices it chose among.
pub fn max_norm_with_candidates(instance: &Instance, p: PNorm) -> Result<(NormSolveReport, Vec<FiberVertex>)> {
    require_nonnegative(instance)?;
    let counter = OracleCounter::new();
    let objective = Objective::lp_norm(p, Sense::Max);
    let n = instance.n();
    let vertices: Vec<FiberVertex> = (0..instance.d())
        .map(|k| FiberVertex::new(n, optimize_over_birkhoff(instance, k, Sense::Max).x))
        .collect();
    let mut best: Option<(Matching, Projection)> = None;
    for v in &vertices {
        let m = v.as_matching().expect("vertices of the Birkhoff polytope are permutation matrices");
        let y = instance.project(&m)?;
        let better = match &best {
            None => true,
            Some((_, by)) => objective.prefer(&y, by, &counter)? == Ordering::Greater,
        };
        if better {
            best = Some((m, y));
        }
    }
    let (matching, projection) = best.expect("d >= 1");
    let guaranteed_ratio = match p {
        PNorm::Infinity => RatioGuarantee::Exact,
        _ if instance.d() == 1 => RatioGuarantee::Exact,
        PNorm::Finite(p) => RatioGuarantee::Powered { d: instance.d(), p },
    };
    let report = NormSolveReport { matching, projection, p, guaranteed_ratio, oracle_queries: counter.queries() };
    Ok((report, vertices))
}
