//! Machine-first result documents (JSON) and CSV emitters for traces and
//! benchmark sweeps.

use mapel_core::{FeasibilityReason, FeasibilityReport, GridResult, MapelResult, MapelStatus};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Serialize)]
pub struct SolveDoc {
    pub status: String,
    pub delta: f64,
    pub epsilon_bound: f64,
    pub objective_bps_hz: f64,
    pub upper_bound_bps_hz: f64,
    pub outer_iterations: usize,
    pub p_star_w: Vec<f64>,
    pub z_star: Vec<f64>,
}

pub fn status_name(status: MapelStatus) -> &'static str {
    match status {
        MapelStatus::Converged => "converged",
        MapelStatus::VertexCapReached => "vertex_cap_reached",
        MapelStatus::IterCapReached => "iter_cap_reached",
        MapelStatus::InfeasibleRates => "infeasible_rates",
    }
}

impl SolveDoc {
    pub fn from_result(r: &MapelResult, delta: f64) -> Self {
        SolveDoc {
            status: status_name(r.status).to_string(),
            delta,
            epsilon_bound: r.epsilon_bound,
            objective_bps_hz: r.objective_bps_hz,
            upper_bound_bps_hz: r.upper_bound_bps_hz,
            outer_iterations: r.outer_iterations,
            p_star_w: r.p_star.clone(),
            z_star: r.z_star.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MaxminDoc {
    pub p_w: Vec<f64>,
    pub min_sinr: f64,
    pub min_sinr_db: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleDoc {
    pub p_best_w: Vec<f64>,
    pub objective_bps_hz: f64,
    pub points_evaluated: u64,
}

impl From<&GridResult> for OracleDoc {
    fn from(g: &GridResult) -> Self {
        OracleDoc {
            p_best_w: g.p_best.clone(),
            objective_bps_hz: g.objective_bps_hz,
            points_evaluated: g.points_evaluated,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FeasibilityDoc {
    pub feasible: bool,
    pub reason: String,
    pub spectral_radius_b: f64,
    pub p_hat_w: Option<Vec<f64>>,
}

impl From<&FeasibilityReport> for FeasibilityDoc {
    fn from(rep: &FeasibilityReport) -> Self {
        FeasibilityDoc {
            feasible: rep.feasible,
            reason: match rep.reason {
                FeasibilityReason::Feasible => "feasible",
                FeasibilityReason::SpectralRadiusExceedsOne => "spectral_radius_exceeds_one",
                FeasibilityReason::PowerCapViolated => "power_cap_violated",
            }
            .to_string(),
            spectral_radius_b: rep.spectral_radius_b,
            p_hat_w: rep.p_hat.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// Trace CSV with a leading delta column so multi-delta sweeps share a file.
pub fn trace_csv(runs: &[(f64, &MapelResult)]) -> String {
    let mut out = String::from(
        "delta,iteration,num_vertices,upper_bound_bps_hz,best_feasible_bps_hz,gap_ratio\n",
    );
    for (delta, result) in runs {
        for row in &result.trace {
            writeln!(
                out,
                "{delta},{},{},{},{},{}",
                row.iteration,
                row.num_vertices,
                row.upper_bound_bps_hz,
                row.best_feasible_bps_hz,
                row.gap_ratio
            )
            .expect("write to string");
        }
    }
    out
}

/// One benchmark measurement (a `(topology, delta)` pair).
pub struct BenchRow {
    pub seed: u64,
    pub links: usize,
    pub delta: f64,
    pub objective_bps_hz: f64,
    pub upper_bound_bps_hz: f64,
    pub outer_iterations: usize,
    pub vertex_peak: usize,
    pub wall_time_s: f64,
    pub oracle_bps_hz: Option<f64>,
}

/// Benchmark CSV. Every column except `wall_time_s` is deterministic for
/// fixed flags; the summary row carries the column means.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "seed,links,delta,objective_bps_hz,upper_bound_bps_hz,outer_iterations,vertex_peak,wall_time_s,oracle_bps_hz\n",
    );
    for r in rows {
        let oracle = r.oracle_bps_hz.map_or(String::new(), |v| v.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.3},{}",
            r.seed,
            r.links,
            r.delta,
            r.objective_bps_hz,
            r.upper_bound_bps_hz,
            r.outer_iterations,
            r.vertex_peak,
            r.wall_time_s,
            oracle
        )
        .expect("write to string");
    }
    if !rows.is_empty() {
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&BenchRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        let oracle_values: Vec<f64> = rows.iter().filter_map(|r| r.oracle_bps_hz).collect();
        let oracle_mean = if oracle_values.is_empty() {
            String::new()
        } else {
            (oracle_values.iter().sum::<f64>() / oracle_values.len() as f64).to_string()
        };
        writeln!(
            out,
            "mean,{},,{},{},{},{},{:.3},{}",
            rows[0].links,
            mean(&|r: &BenchRow| r.objective_bps_hz),
            mean(&|r: &BenchRow| r.upper_bound_bps_hz),
            mean(&|r: &BenchRow| r.outer_iterations as f64),
            mean(&|r: &BenchRow| r.vertex_peak as f64),
            mean(&|r: &BenchRow| r.wall_time_s),
            oracle_mean
        )
        .expect("write to string");
    }
    out
}
