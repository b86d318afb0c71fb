//! Projection of a point onto the feasible SINR-surrogate region, and the
//! max-min SINR solver built on the same iteration.
//!
//! The projection of `z` is the point `lambda * z` where the ray from the
//! origin through `z` meets the upper boundary of the feasible region, with
//!
//! ```text
//! lambda = max_{p in P} min_i f_i(p) / (z_i g_i(p)).
//! ```
//!
//! This generalized fractional program is solved by a Dinkelbach-type
//! iteration: evaluate the ratio at the current power vector, then maximize
//! the parametric max-min `min_i (f_i(p) - lambda z_i g_i(p))` — a linear
//! program — and repeat until the parametric value drops to zero. The lambda
//! sequence is nondecreasing and each lambda is certified by the power vector
//! that attains it.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::numerics::{solve_maxmin_lp, AffineRow, LpStatus, MaxMinLpProblem};
use crate::solver::SolverConfig;

/// Result of one projection call.
///
/// The invariant `lambda = min_i f_i(p_star) / (z_i g_i(p_star))` holds
/// exactly by construction: `p_star` is the iterate that defined the returned
/// `lambda`. `lambda_history` records the internal nondecreasing sequence.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub lambda: f64,
    pub p_star: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub lambda_history: Vec<f64>,
}

/// Ratio system `numer_i(p) / denom_i(p)` with positive denominators on the
/// power box.
struct RatioSystem {
    numer: Vec<AffineRow>,
    denom: Vec<AffineRow>,
    extra_rows: Vec<AffineRow>,
}

impl RatioSystem {
    fn min_ratio(&self, p: &[f64]) -> f64 {
        self.numer
            .iter()
            .zip(&self.denom)
            .map(|(n, d)| n.eval(p) / d.eval(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Column `i` of the gain matrix as the coefficient vector of
/// `f_i(p) = G_ii p_i + sum_{j != i} G_ji p_j + n_i`; zeroing the diagonal
/// entry gives `g_i`.
fn fraction_rows(net: &Network) -> (Vec<AffineRow>, Vec<AffineRow>) {
    let m = net.links();
    let mut fs = Vec::with_capacity(m);
    let mut gs = Vec::with_capacity(m);
    for i in 0..m {
        let f: Vec<f64> = (0..m).map(|j| net.gains()[(j, i)]).collect();
        let mut g = f.clone();
        g[i] = 0.0;
        fs.push(AffineRow::new(f, net.noise()[i]));
        gs.push(AffineRow::new(g, net.noise()[i]));
    }
    (fs, gs)
}

fn clamp_into_box(p: &mut [f64], upper: &[f64]) {
    for (x, hi) in p.iter_mut().zip(upper) {
        *x = x.clamp(0.0, *hi);
    }
}

/// Core Dinkelbach loop. `p0` must satisfy the extra rows and the box.
///
/// Each ratio is first normalized by its denominator's constant term (the
/// noise floor of that denominator). Ratios are unchanged, but the
/// denominators then satisfy `g~_i >= 1` on the whole box, so the termination
/// test `max-min value <= proj_tol` bounds the lambda error by `proj_tol`
/// itself instead of `proj_tol / min_i z_i g_i` — without this, 0.1 uW noise
/// floors let lambda drift by percents and the refinement cuts into the
/// feasible region.
fn dinkelbach(
    sys: &RatioSystem,
    p_max: &[f64],
    p0: Vec<f64>,
    cfg: &SolverConfig,
) -> Result<ProjectionResult> {
    let scale = |row: &AffineRow, s: f64| {
        AffineRow::new(row.coeffs.iter().map(|c| c / s).collect(), row.constant / s)
    };
    let sys = RatioSystem {
        numer: sys
            .numer
            .iter()
            .zip(&sys.denom)
            .map(|(n, d)| scale(n, d.constant))
            .collect(),
        denom: sys.denom.iter().map(|d| scale(d, d.constant)).collect(),
        extra_rows: sys.extra_rows.clone(),
    };
    let sys = &sys;

    let m = p_max.len();
    let mut p = p0;
    clamp_into_box(&mut p, p_max);
    let mut lambda = sys.min_ratio(&p);
    let mut history = vec![lambda];

    // Certified upper bracket on the optimal scaling. Because the normalized
    // denominators satisfy g~_i(p) >= 1 everywhere, the parametric value
    // F(q) = max_p min_i (f~_i - q g~_i)(p) obeys F(q + F(q)) <= 0, so every
    // query certifies lambda* <= q + F(q). The loop takes plain Dinkelbach
    // steps while they make progress and bisects the bracket when they creep
    // (the iteration degrades to linear convergence on instances where the
    // inner max-min has non-unique maximizers).
    let mut hi = f64::INFINITY;
    let mut query = lambda;

    for iter in 1..=cfg.proj_max_iter {
        let rows: Vec<AffineRow> = sys
            .numer
            .iter()
            .zip(&sys.denom)
            .map(|(n, d)| {
                let coeffs = n
                    .coeffs
                    .iter()
                    .zip(&d.coeffs)
                    .map(|(a, b)| a - query * b)
                    .collect();
                AffineRow::new(coeffs, n.constant - query * d.constant)
            })
            .collect();
        let prob = MaxMinLpProblem {
            objective_rows: rows,
            box_lower: vec![0.0; m],
            box_upper: p_max.to_vec(),
            extra_rows: sys.extra_rows.clone(),
        };
        let sol = solve_maxmin_lp(&prob, cfg.lp_tol)?;
        if sol.status == LpStatus::InfeasiblePolytope {
            return Err(Error::Infeasible(
                "projection polytope is empty; minimum rates were not validated".into(),
            ));
        }
        // the bracket is certified up to the LP's own optimality slack;
        // lambda itself is always witnessed by a feasible power vector, so an
        // optimistic bracket can only make the convergence flag conservative
        hi = hi.min(query + sol.value.max(0.0));

        let mut p_next = sol.p_opt;
        clamp_into_box(&mut p_next, p_max);
        let candidate = sys.min_ratio(&p_next);
        let previous = lambda;
        if candidate > lambda {
            lambda = candidate;
            p = p_next;
            history.push(lambda);
        }
        if hi - lambda <= cfg.proj_tol {
            return Ok(ProjectionResult {
                lambda,
                p_star: p,
                iterations: iter,
                converged: true,
                lambda_history: history,
            });
        }
        let progress = lambda - previous;
        query = if hi.is_finite() && progress < (hi - lambda) / 4.0 {
            lambda + (hi - lambda) / 2.0
        } else {
            lambda
        };
    }

    Ok(ProjectionResult {
        lambda,
        p_star: p,
        iterations: cfg.proj_max_iter,
        converged: false,
        lambda_history: history,
    })
}

/// Builds the ratio system for the projection of `z`: numerators `f_i`,
/// denominators `z_i g_i`, plus the minimum-rate rows
/// `f_i - 2^{r_min_i} g_i >= 0` defining the power polytope.
fn projection_system(net: &Network, z: &[f64]) -> RatioSystem {
    let (fs, gs) = fraction_rows(net);
    let floors = net.rate_fraction_floors();
    let denom: Vec<AffineRow> = gs
        .iter()
        .zip(z)
        .map(|(g, zi)| AffineRow::new(g.coeffs.iter().map(|c| c * zi).collect(), g.constant * zi))
        .collect();
    let mut extra_rows = Vec::new();
    for i in 0..net.links() {
        if net.r_min()[i] > 0.0 {
            let coeffs = fs[i]
                .coeffs
                .iter()
                .zip(&gs[i].coeffs)
                .map(|(a, b)| a - floors[i] * b)
                .collect();
            extra_rows.push(AffineRow::new(
                coeffs,
                fs[i].constant - floors[i] * gs[i].constant,
            ));
        }
    }
    RatioSystem {
        numer: fs,
        denom,
        extra_rows,
    }
}

pub(crate) fn validate_z(net: &Network, z: &[f64]) -> Result<()> {
    if z.len() != net.links() {
        return Err(Error::DimensionMismatch {
            expected: net.links(),
            found: z.len(),
        });
    }
    if let Some(i) = z.iter().position(|x| !(*x > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "z[{i}] must be > 0, got {}",
            z[i]
        )));
    }
    Ok(())
}

/// Projection with a caller-provided feasible starting power (used by the
/// outer solver, which has already run the feasibility check once).
pub(crate) fn project_from(
    net: &Network,
    z: &[f64],
    cfg: &SolverConfig,
    p0: Vec<f64>,
) -> Result<ProjectionResult> {
    validate_z(net, z)?;
    cfg.validate()?;
    dinkelbach(&projection_system(net, z), net.p_max(), p0, cfg)
}

/// Computes the boundary scaling `lambda` for the ray through `z` and the
/// power vector attaining it.
///
/// When any rate floor is active the instance is feasibility-checked first
/// and the Dinkelbach iteration starts from the minimal floor-meeting power
/// (which lies in the polytope); with no floors it starts from the caps.
pub fn project(net: &Network, z: &[f64], cfg: &SolverConfig) -> Result<ProjectionResult> {
    validate_z(net, z)?;
    cfg.validate()?;
    let p0 = if net.r_min().iter().any(|r| *r > 0.0) {
        let report = net.check_feasibility()?;
        if !report.feasible {
            return Err(Error::Infeasible(
                "minimum rates are infeasible for this network".into(),
            ));
        }
        report.p_hat.expect("feasible report carries p_hat")
    } else {
        net.p_max().to_vec()
    };
    dinkelbach(&projection_system(net, z), net.p_max(), p0, cfg)
}

/// Maximizes the minimum per-link SINR over the power box (rate floors are
/// ignored). Same Dinkelbach iteration with numerators `G_ii p_i` — the SINR
/// itself rather than `1 + SINR`. Returns the maximizing power vector and the
/// attained minimum SINR; if the iteration budget runs out the best certified
/// pair so far is returned, exactly as in [`project`].
pub fn maxmin_sinr(net: &Network, cfg: &SolverConfig) -> Result<(Vec<f64>, f64)> {
    cfg.validate()?;
    let m = net.links();
    let (_, gs) = fraction_rows(net);
    let mut numer = Vec::with_capacity(m);
    for i in 0..m {
        let mut coeffs = vec![0.0; m];
        coeffs[i] = net.gains()[(i, i)];
        numer.push(AffineRow::new(coeffs, 0.0));
    }
    let sys = RatioSystem {
        numer,
        denom: gs,
        extra_rows: Vec::new(),
    };
    let result = dinkelbach(&sys, net.p_max(), net.p_max().to_vec(), cfg)?;
    let min_sinr = net
        .sinr(&result.p_star)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok((result.p_star, min_sinr))
}
