//! Globally optimal transmit-power control for interference-limited wireless
//! networks.
//!
//! The weighted-throughput maximization problem
//!
//! ```text
//! max_p  sum_i w_i log2(1 + SINR_i(p))
//! s.t.   log2(1 + SINR_i(p)) >= r_min_i,   0 <= p_i <= p_max_i
//! ```
//!
//! is non-convex in the powers because of interference coupling, but its
//! image under `z_i = f_i(p)/g_i(p) = 1 + SINR_i(p)` is a normal set, and the
//! objective `Phi(z) = prod z_i^{w_i}` is increasing. The solver exploits
//! this by enclosing the feasible `z`-region in a shrinking sequence of
//! polyblocks (unions of boxes identified by their proper vertex sets): each
//! step projects the best box corner onto the feasible region along its ray
//! — a Dinkelbach iteration whose inner step is a small linear program — and
//! refines the enclosure until the corner is within a factor `1 - delta` of
//! its projection. The returned solution carries a certified multiplicative
//! optimality bound of `delta / (1 - delta)`.
//!
//! Modules:
//! - [`network`]: problem instances, SINR evaluation, rate-floor feasibility.
//! - [`numerics`]: dense kernels (Perron root, linear solve, max-min LP).
//! - [`projection`]: ray projection and the max-min SINR solver.
//! - [`polyblock`]: proper vertex sets and the refinement step.
//! - [`solver`]: the outer loop, certificates, trace capture.
//! - [`oracle`]: exhaustive grid search for independent verification.
//! - [`topology`]: reference fixtures and seeded random networks.

// validation comparisons are written as `!(x > 0.0)` on purpose: the negated
// form rejects NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod network;
pub mod numerics;
pub mod oracle;
pub mod polyblock;
pub mod projection;
pub mod solver;
pub mod topology;

pub use error::{Error, Result};
pub use network::{FeasibilityReason, FeasibilityReport, Network};
pub use oracle::{grid_search, GridResult};
pub use polyblock::{initial_vertex, VertexSet};
pub use projection::{maxmin_sinr, project, ProjectionResult};
pub use solver::{
    epsilon_bound, recover_power, solve, solve_with_observer, IterationEvent, MapelResult,
    MapelStatus, SolverConfig, TraceRow,
};
pub use topology::{fixture, random_network, Fixture, PowerLimits, TopologySpec};
