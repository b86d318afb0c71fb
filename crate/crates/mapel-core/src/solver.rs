//! Outer approximation loop: shrinking polyblocks around the feasible
//! SINR-surrogate region until the selected corner is within a factor
//! `1 - delta` of its own projection, plus power recovery and the
//! approximation certificate.
//!
//! Each iteration selects the vertex maximizing the objective over the
//! current vertex set, projects it onto the feasible region, and either
//! terminates (relative gap at most `delta`) or replaces the vertex by its
//! refinement children. The best feasible candidate seen so far is tracked
//! across iterations — both the projection itself and the fraction vector of
//! its witness power, which dominates the projection componentwise — so the
//! reported solution is never worse than the terminal projection and keeps
//! the same certificate.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::numerics::{self, Matrix};
use crate::polyblock::{initial_vertex, VertexSet};
use crate::projection::{self, ProjectionResult};

/// Tolerances and caps. `delta` is the approximation factor in `(0, 1)`;
/// everything else is a numerical knob the algorithm statement leaves open.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Termination gap: stop once `max_i (z_i - pi_i) / z_i <= delta`.
    pub delta: f64,
    /// Absolute floor on the parametric max-min value that ends a projection.
    /// Its scale is set by the noise powers (watts); instances with much
    /// smaller values should scale up or loosen this.
    pub proj_tol: f64,
    pub proj_max_iter: usize,
    pub lp_tol: f64,
    pub max_outer_iter: usize,
    pub max_vertices: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            delta: 0.05,
            proj_tol: 1e-9,
            proj_max_iter: 200,
            lp_tol: 1e-9,
            max_outer_iter: 500_000,
            max_vertices: 2_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        for (name, v) in [("proj_tol", self.proj_tol), ("lp_tol", self.lp_tol)] {
            if !(v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.proj_max_iter == 0 || self.max_outer_iter == 0 || self.max_vertices == 0 {
            return Err(Error::InvalidInput(
                "iteration and vertex caps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// How a solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapelStatus {
    Converged,
    VertexCapReached,
    IterCapReached,
    InfeasibleRates,
}

/// One outer iteration of the trace. Upper bounds are non-increasing and the
/// best feasible value non-decreasing along the run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub num_vertices: usize,
    pub upper_bound_bps_hz: f64,
    pub best_feasible_bps_hz: f64,
    /// `max_i (z_i - pi_i) / z_i` of the iteration.
    pub gap_ratio: f64,
}

/// Solver output. `objective_bps_hz = log2 Phi(z_star)` is certified to be
/// within `log2(1/(1-delta))` of the global optimum when `status` is
/// `Converged`; `upper_bound_bps_hz` is the terminal polyblock bound
/// (positive infinity when the rate floors are infeasible and no bound was
/// established).
#[derive(Debug, Clone)]
pub struct MapelResult {
    pub p_star: Vec<f64>,
    pub z_star: Vec<f64>,
    pub objective_bps_hz: f64,
    pub upper_bound_bps_hz: f64,
    pub epsilon_bound: f64,
    pub outer_iterations: usize,
    pub status: MapelStatus,
    pub trace: Vec<TraceRow>,
}

/// Per-iteration view passed to observers: the vertex set as selected from,
/// the selected vertex, and its projection.
pub struct IterationEvent<'a> {
    pub iteration: usize,
    pub vertex_set: &'a VertexSet,
    pub selected: &'a [f64],
    pub lambda: f64,
    pub projection: &'a [f64],
}

/// Multiplicative optimality slack `delta / (1 - delta)` certified at
/// convergence with approximation factor `delta`.
pub fn epsilon_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(delta / (1.0 - delta))
}

fn log2_phi(net: &Network, z: &[f64]) -> f64 {
    z.iter()
        .zip(net.weights())
        .map(|(zi, w)| w * zi.log2())
        .sum()
}

/// Recovers the power vector realizing a boundary point `z`: solves the
/// linear system `(z_i - 1)(sum_{j != i} G_ji p_j + n_i) = G_ii p_i`. If the
/// solution violates the box or rate rows by more than 1e-6 relative, the
/// projection witness `fallback_p` is returned instead (it attains the same
/// objective within tolerance).
pub fn recover_power(net: &Network, z: &[f64], fallback_p: &[f64]) -> Result<Vec<f64>> {
    let m = net.links();
    projection::validate_z(net, z)?;
    if fallback_p.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: fallback_p.len(),
        });
    }

    let mut a = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        a[(i, i)] = net.gains()[(i, i)];
        for j in 0..m {
            if j != i {
                a[(i, j)] = -(z[i] - 1.0) * net.gains()[(j, i)];
            }
        }
        rhs[i] = (z[i] - 1.0) * net.noise()[i];
    }

    if let Ok(mut p) = numerics::solve_linear(&a, &rhs) {
        if power_is_valid(net, &p, 1e-6) {
            for (x, cap) in p.iter_mut().zip(net.p_max()) {
                *x = x.clamp(0.0, *cap);
            }
            return Ok(p);
        }
    }

    if power_is_valid(net, fallback_p, 1e-6) {
        let mut p = fallback_p.to_vec();
        for (x, cap) in p.iter_mut().zip(net.p_max()) {
            *x = x.clamp(0.0, *cap);
        }
        return Ok(p);
    }
    Err(Error::Numerical(
        "power recovery failed and the projection witness is invalid".into(),
    ))
}

fn power_is_valid(net: &Network, p: &[f64], rel_tol: f64) -> bool {
    if p.len() != net.links() || p.iter().any(|x| !x.is_finite()) {
        return false;
    }
    for (x, cap) in p.iter().zip(net.p_max()) {
        if *x < -rel_tol * cap || *x > cap * (1.0 + rel_tol) {
            return false;
        }
    }
    let clamped: Vec<f64> = p
        .iter()
        .zip(net.p_max())
        .map(|(x, cap)| x.clamp(0.0, *cap))
        .collect();
    let frac = match net.fraction_fg(&clamped) {
        Ok(f) => f,
        Err(_) => return false,
    };
    frac.iter()
        .zip(net.rate_fraction_floors())
        .all(|(f, floor)| *f >= floor * (1.0 - rel_tol))
}

/// Runs the solver. See [`solve_with_observer`] for the full description.
///
/// # Example
///
/// ```
/// use mapel_core::{solve, Network, SolverConfig};
///
/// // one interference-free link: the optimum is the power cap, rate 1 bps/Hz
/// let net = Network::new(vec![vec![1.0]], vec![1.0], vec![1.0], vec![1.0], vec![0.0])?;
/// let result = solve(&net, &SolverConfig::default())?;
/// assert!((result.objective_bps_hz - 1.0).abs() < 1e-9);
/// assert!(result.objective_bps_hz <= result.upper_bound_bps_hz + 1e-9);
/// # Ok::<(), mapel_core::Error>(())
/// ```
pub fn solve(net: &Network, cfg: &SolverConfig) -> Result<MapelResult> {
    solve_with_observer(net, cfg, |_| {})
}

/// Runs the solver, invoking `observer` once per outer iteration after the
/// projection and before the refinement. The solver never panics on valid
/// input; infeasible rate floors and resource caps are reported through
/// `status`. A projection that exhausts its own iteration budget is used
/// as-is: its scaling is still witness-certified, merely possibly below the
/// true boundary, which makes the refinement conservative rather than wrong.
pub fn solve_with_observer(
    net: &Network,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&IterationEvent<'_>),
) -> Result<MapelResult> {
    cfg.validate()?;
    let report = net.check_feasibility()?;
    if !report.feasible {
        return Ok(infeasible_result(net, cfg));
    }
    let p_start = if net.r_min().iter().any(|r| *r > 0.0) {
        report.p_hat.expect("feasible report carries p_hat")
    } else {
        net.p_max().to_vec()
    };

    let floors = net.rate_fraction_floors();
    let b = initial_vertex(net);
    if b.iter().zip(&floors).any(|(bi, fi)| bi < fi) {
        // cannot happen for a feasibility-checked instance: b_i bounds f_i/g_i
        // from above, which is at least the floor at p_hat
        return Err(Error::Numerical(
            "initial box corner lies outside the rate region".into(),
        ));
    }
    let mut vs = VertexSet::new(b, floors, net.weights().to_vec())?;

    let mut best_phi = f64::NEG_INFINITY;
    let mut best_z: Vec<f64> = Vec::new();
    let mut best_p: Vec<f64> = Vec::new();
    let mut trace = Vec::new();

    let mut status = MapelStatus::IterCapReached;
    let mut upper_terminal = f64::INFINITY;
    let mut outer_iterations = cfg.max_outer_iter;

    for k in 1..=cfg.max_outer_iter {
        let Some(selected) = vs.select_best(net) else {
            // per the design note: re-verify feasibility before declaring an
            // internal failure
            let again = net.check_feasibility()?;
            if !again.feasible {
                return Ok(infeasible_result(net, cfg));
            }
            return Err(Error::Numerical(
                "vertex set no longer covers the rate region of a feasible instance".into(),
            ));
        };
        let z_k = selected.to_vec();

        let proj: ProjectionResult = projection::project_from(net, &z_k, cfg, p_start.clone())?;
        let lambda = proj.lambda;
        let pi: Vec<f64> = z_k.iter().map(|z| lambda * z).collect();

        // candidate feasible points: the projection and its witness fraction
        let phi_pi = log2_phi(net, &pi);
        if phi_pi > best_phi {
            best_phi = phi_pi;
            best_z = pi.clone();
            best_p = proj.p_star.clone();
        }
        let witness = net.fraction_fg(&proj.p_star)?;
        let phi_wit = log2_phi(net, &witness);
        if phi_wit > best_phi {
            best_phi = phi_wit;
            best_z = witness;
            best_p = proj.p_star.clone();
        }

        let upper = log2_phi(net, &z_k);
        let gap = z_k
            .iter()
            .zip(&pi)
            .map(|(z, p)| if *z < 1e-300 { 0.0 } else { (z - p) / z })
            .fold(f64::NEG_INFINITY, f64::max);
        trace.push(TraceRow {
            iteration: k,
            num_vertices: vs.len(),
            upper_bound_bps_hz: upper,
            best_feasible_bps_hz: best_phi,
            gap_ratio: gap,
        });
        observer(&IterationEvent {
            iteration: k,
            vertex_set: &vs,
            selected: &z_k,
            lambda,
            projection: &pi,
        });

        if gap <= cfg.delta {
            status = MapelStatus::Converged;
            upper_terminal = upper;
            outer_iterations = k;
            break;
        }
        vs.replace_vertex(&z_k, &pi)?;
        if vs.len() > cfg.max_vertices {
            status = MapelStatus::VertexCapReached;
            upper_terminal = upper;
            outer_iterations = k;
            break;
        }
        if k == cfg.max_outer_iter {
            upper_terminal = upper;
        }
    }

    let p_star = recover_power(net, &best_z, &best_p)?;
    Ok(MapelResult {
        p_star,
        z_star: best_z,
        objective_bps_hz: best_phi,
        upper_bound_bps_hz: upper_terminal,
        epsilon_bound: epsilon_bound(cfg.delta)?,
        outer_iterations,
        status,
        trace,
    })
}

fn infeasible_result(net: &Network, cfg: &SolverConfig) -> MapelResult {
    let m = net.links();
    MapelResult {
        p_star: vec![0.0; m],
        z_star: vec![1.0; m],
        objective_bps_hz: 0.0,
        upper_bound_bps_hz: f64::INFINITY,
        epsilon_bound: cfg.delta / (1.0 - cfg.delta),
        outer_iterations: 0,
        status: MapelStatus::InfeasibleRates,
        trace: Vec::new(),
    }
}
