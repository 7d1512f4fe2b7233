//! Nonlinear bipartite matching.
//!
//! Given `d` integer weight matrices on the edges of K_{n,n} and an
//! objective `f` on Z^d available only through comparisons, find a perfect
//! matching `M` optimizing `f(w^1(M), …, w^d(M))`.
//!
//! * [`convex`] maximizes convex `f` exactly through the multiobjective
//!   polytope `Π_w^n` built in [`polytope`] from fiber LPs ([`fiber`],
//!   [`simplex`]).
//! * [`norms`] approximates lp-norm minimization and maximization.
//! * [`randomized`] handles arbitrary `f` with a determinant-interpolation
//!   estimator and a greedy self-reduction.
//! * [`brute`] enumerates all `n!` matchings and is the reference for the
//!   rest; [`generators`] builds instances from the classic reductions.
//!
//! All arithmetic is exact.

pub mod brute;
pub mod convex;
pub mod error;
pub mod fiber;
pub mod fixtures;
pub mod generators;
pub mod instance;
pub mod norms;
pub mod objective;
pub mod polytope;
pub mod randomized;
pub mod simplex;

pub use brute::{brute_force_projections, brute_force_solve, DEFAULT_BRUTE_FORCE_CAP};
pub use convex::{maximize_convex, maximize_convex_variant, ConvexMethod, ConvexSolveReport};
pub use error::{Error, Result};
pub use fiber::{enumerate_fiber_vertices, fiber_permutation, fiber_vertex, FiberVertex};
pub use instance::{normalize_nonnegative, Instance, Matching, Normalized, Projection};
pub use norms::{max_norm, min_norm, NormSolveReport, RatioGuarantee};
pub use objective::{norm_compare, Objective, ObjectiveKind, OracleCounter, PNorm, Sense};
pub use polytope::{
    brute_force_edge_directions, edge_direction_count, feasible_grid_points, grid_bounds, polytope_vertices,
    EdgeDirection, GridBounds, MultiobjectivePolytope,
};
pub use randomized::{
    det_at, optimum_value_estimate, randomized_solve, restrict, support, ASubstitution, RandomizedConfig,
    RandomizedReport, RngHandle, SupportSet,
};
pub use simplex::{LpOutcome, LpSolution, StandardLp};
