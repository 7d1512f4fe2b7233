//! Exact maximization of convex objectives over perfect matchings.
//!
//! A convex `f` attains its maximum over `Π_w^n` at a vertex, and the fiber
//! of a vertex is an integral face of the Birkhoff polytope, so an LP vertex
//! of that fiber is a permutation matrix. Convexity is a caller contract and
//! is never checked; with a non-convex oracle the matching returned is
//! feasible but carries no optimality claim.

use std::cmp::Ordering;
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fiber::{fiber_permutation, fiber_vertex};
use crate::instance::{Instance, Matching, Projection};
use crate::objective::{Objective, OracleCounter};
use crate::polytope::{extreme_points, feasible_in_box, grid_bounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexMethod {
    /// Build every vertex of the multiobjective polytope, then pick the best.
    Full,
    /// Scan the grid box in order of decreasing objective value.
    Variant,
}

impl fmt::Display for ConvexMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexMethod::Full => "convex",
            ConvexMethod::Variant => "convex-variant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexSolveReport {
    pub matching: Matching,
    pub projection: Projection,
    /// Number of fiber LPs solved.
    pub fibers_tested: u64,
    pub oracle_queries: u64,
    pub method: ConvexMethod,
    /// Grid points in the order the variant tested them; empty for `Full`.
    pub tested: Vec<Projection>,
}

/// Computes `vert(Π_w^n)`, takes the oracle-best vertex (lexicographically
/// smallest among ties) and recovers a matching from its fiber.
pub fn maximize_convex(instance: &Instance, objective: &Objective) -> Result<ConvexSolveReport> {
    let counter = OracleCounter::new();
    let bounds = grid_bounds(instance);
    let feasible = feasible_in_box(instance, &bounds)?;
    let vertices = extreme_points(&feasible);
    let best = objective.best(vertices.iter(), &counter)?.expect("Π_w^n has a vertex").clone();
    let matching = fiber_permutation(instance, &best)?;
    let scanned = bounds.size().to_u64().unwrap_or(u64::MAX);
    Ok(ConvexSolveReport {
        projection: instance.project(&matching)?,
        matching,
        fibers_tested: scanned.saturating_add(1),
        oracle_queries: counter.queries(),
        method: ConvexMethod::Full,
        tested: Vec::new(),
    })
}

/// Sorts the grid box by nonincreasing objective value (lexicographic among
/// ties) and returns the first point whose fiber LP yields a permutation
/// matrix. Fibers that are empty or whose LP vertex is fractional are
/// skipped.
pub fn maximize_convex_variant(instance: &Instance, objective: &Objective) -> Result<ConvexSolveReport> {
    let counter = OracleCounter::new();
    let mut grid = grid_bounds(instance).points();
    let mut failure = None;
    // Stable sort: ties keep lexicographic order.
    grid.sort_by(|a, b| match objective.prefer(a, b, &counter) {
        Ok(ord) => ord.reverse(),
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut tested = Vec::new();
    for y in grid {
        let vertex = fiber_vertex(instance, &y)?;
        tested.push(y.clone());
        if let Some(matching) = vertex.and_then(|v| v.as_matching()) {
            return Ok(ConvexSolveReport {
                matching,
                projection: y,
                fibers_tested: tested.len() as u64,
                oracle_queries: counter.queries(),
                method: ConvexMethod::Variant,
                tested,
            });
        }
    }
    Err(Error::Exhausted)
}
