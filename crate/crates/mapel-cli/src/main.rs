//! Command-line front end: instance I/O, solver invocation, benchmark sweeps
//! and machine-readable outputs.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 infeasible rates,
//! 4 resource cap reached (best-so-far result still written).

mod instance;
mod output;

use clap::{Args, Parser, Subcommand};
use instance::InstanceFile;
use mapel_core::{
    grid_search, maxmin_sinr, random_network, solve, Error, Fixture, MapelResult, MapelStatus,
    Network, SolverConfig, TopologySpec,
};
use output::{BenchRow, FeasibilityDoc, MaxminDoc, OracleDoc, SolveDoc};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_RESOURCE_CAP: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mapel",
    version,
    about = "Globally optimal transmit-power control for interference-limited networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize weighted sum throughput with a certified optimality gap
    Solve(SolveArgs),
    /// Maximize the minimum per-link SINR over the power box
    Maxmin(MaxminArgs),
    /// Exhaustive grid-search baseline (at most 4 links)
    Oracle(OracleArgs),
    /// Seeded random-topology benchmark sweep, CSV output
    Bench(BenchArgs),
    /// Check feasibility of the minimum-rate constraints
    Feasibility(FeasibilityArgs),
}

#[derive(Args)]
struct InstanceSel {
    /// Instance file (JSON: gains, noise_w, p_max_w, weights, r_min_bps_hz)
    #[arg(long, value_name = "PATH", conflicts_with = "fixture")]
    instance: Option<PathBuf>,
    /// Built-in instance
    #[arg(long, value_parser = ["g1", "g2"])]
    fixture: Option<String>,
}

impl InstanceSel {
    fn network(&self) -> Result<Network, Failure> {
        match (&self.instance, &self.fixture) {
            (Some(path), None) => {
                let inst = InstanceFile::load(path).map_err(Failure::usage)?;
                inst.to_network().map_err(|e| Failure::usage(e.to_string()))
            }
            (None, Some(name)) => Ok(mapel_core::fixture(match name.as_str() {
                "g1" => Fixture::G1,
                _ => Fixture::G2,
            })),
            _ => Err(Failure::usage(
                "exactly one of --instance or --fixture is required",
            )),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    sel: InstanceSel,
    /// Approximation factor(s) in (0,1); a comma list runs a sweep
    #[arg(long, default_value = "0.05", value_name = "X[,Y...]")]
    delta: String,
    /// Write per-iteration trace rows (CSV) here
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Write the result document here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Abort with best-so-far once the vertex set exceeds this size
    #[arg(long, value_name = "N")]
    max_vertices: Option<usize>,
}

#[derive(Args)]
struct MaxminArgs {
    #[command(flatten)]
    sel: InstanceSel,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    sel: InstanceSel,
    /// Grid points per axis (endpoints included)
    #[arg(long, default_value_t = 101, value_name = "N")]
    resolution: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Links per generated topology
    #[arg(long, default_value_t = 2, value_name = "N")]
    links: usize,
    /// Number of topologies (seeds seed, seed+1, ...)
    #[arg(long, default_value_t = 5, value_name = "N")]
    count: usize,
    /// Base seed
    #[arg(long, default_value_t = 0, value_name = "N")]
    seed: u64,
    /// Approximation factor(s), comma list for a sweep
    #[arg(long, default_value = "0.05", value_name = "X[,Y...]")]
    delta: String,
    /// Per-link minimum rate (bps/Hz) for every topology
    #[arg(long, default_value_t = 0.0, value_name = "X")]
    r_min: f64,
    #[arg(long, value_name = "N")]
    max_vertices: Option<usize>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[command(flatten)]
    sel: InstanceSel,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn from_error(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } => EXIT_USAGE,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Maxmin(args) => cmd_maxmin(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Feasibility(args) => cmd_feasibility(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_deltas(spec: &str) -> Result<Vec<f64>, Failure> {
    let deltas: Result<Vec<f64>, _> = spec.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let deltas = deltas.map_err(|e| Failure::usage(format!("bad --delta value: {e}")))?;
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(Failure::usage("every --delta must lie in (0, 1)"));
    }
    Ok(deltas)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let net = args.sel.network()?;
    let deltas = parse_deltas(&args.delta)?;

    let mut results: Vec<(f64, MapelResult)> = Vec::new();
    for &delta in &deltas {
        let mut cfg = SolverConfig {
            delta,
            ..SolverConfig::default()
        };
        if let Some(mv) = args.max_vertices {
            cfg.max_vertices = mv;
        }
        let r = solve(&net, &cfg).map_err(Failure::from_error)?;
        if r.status == MapelStatus::InfeasibleRates {
            return Err(Failure {
                code: EXIT_INFEASIBLE,
                message: "minimum rates are infeasible for this instance".into(),
            });
        }
        results.push((delta, r));
    }

    if let Some(path) = &args.trace {
        let runs: Vec<(f64, &MapelResult)> = results.iter().map(|(d, r)| (*d, r)).collect();
        std::fs::write(path, output::trace_csv(&runs)).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }

    let docs: Vec<SolveDoc> = results
        .iter()
        .map(|(d, r)| SolveDoc::from_result(r, *d))
        .collect();
    let body = if docs.len() == 1 {
        output::to_json(&docs[0])
    } else {
        output::to_json(&docs)
    };
    emit(&body, &args.out)?;

    let capped = results.iter().any(|(_, r)| {
        matches!(
            r.status,
            MapelStatus::VertexCapReached | MapelStatus::IterCapReached
        )
    });
    Ok(if capped { EXIT_RESOURCE_CAP } else { 0 })
}

fn cmd_maxmin(args: MaxminArgs) -> Result<u8, Failure> {
    let net = args.sel.network()?;
    let (p, min_sinr) = maxmin_sinr(&net, &SolverConfig::default()).map_err(Failure::from_error)?;
    let doc = MaxminDoc {
        p_w: p,
        min_sinr,
        min_sinr_db: 10.0 * min_sinr.log10(),
    };
    emit(&output::to_json(&doc), &args.out)?;
    Ok(0)
}

fn cmd_oracle(args: OracleArgs) -> Result<u8, Failure> {
    let net = args.sel.network()?;
    let grid = grid_search(&net, args.resolution).map_err(Failure::from_error)?;
    emit(&output::to_json(&OracleDoc::from(&grid)), &args.out)?;
    Ok(0)
}

fn cmd_feasibility(args: FeasibilityArgs) -> Result<u8, Failure> {
    let net = args.sel.network()?;
    let report = net.check_feasibility().map_err(Failure::from_error)?;
    emit(&output::to_json(&FeasibilityDoc::from(&report)), &args.out)?;
    Ok(if report.feasible { 0 } else { EXIT_INFEASIBLE })
}

/// Oracle resolution per link count: fine for one or two links, coarser as
/// the point budget grows exponentially; none beyond three links.
fn bench_oracle_resolution(links: usize) -> Option<usize> {
    match links {
        1 => Some(1001),
        2 => Some(501),
        3 => Some(61),
        _ => None,
    }
}

fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    let deltas = parse_deltas(&args.delta)?;
    if args.links == 0 || args.count == 0 {
        return Err(Failure::usage("--links and --count must be positive"));
    }

    let mut rows: Vec<BenchRow> = Vec::new();
    for k in 0..args.count {
        let seed = args.seed + k as u64;
        let spec = TopologySpec {
            r_min_bps_hz: args.r_min,
            ..TopologySpec::new(args.links, seed)
        };
        let net = random_network(&spec).map_err(Failure::from_error)?;
        // infeasible topologies are eliminated from the sweep
        if !net
            .check_feasibility()
            .map_err(Failure::from_error)?
            .feasible
        {
            continue;
        }
        let oracle = match bench_oracle_resolution(args.links) {
            Some(res) => Some(
                grid_search(&net, res)
                    .map(|g| g.objective_bps_hz)
                    .map_err(Failure::from_error)?,
            ),
            None => None,
        };
        for &delta in &deltas {
            let mut cfg = SolverConfig {
                delta,
                ..SolverConfig::default()
            };
            if let Some(mv) = args.max_vertices {
                cfg.max_vertices = mv;
            }
            let t0 = Instant::now();
            let r = solve(&net, &cfg).map_err(Failure::from_error)?;
            let wall = t0.elapsed().as_secs_f64();
            rows.push(BenchRow {
                seed,
                links: args.links,
                delta,
                objective_bps_hz: r.objective_bps_hz,
                upper_bound_bps_hz: r.upper_bound_bps_hz,
                outer_iterations: r.outer_iterations,
                vertex_peak: r.trace.iter().map(|t| t.num_vertices).max().unwrap_or(0),
                wall_time_s: wall,
                oracle_bps_hz: oracle,
            });
        }
    }
    emit(&output::bench_csv(&rows), &args.out)?;
    Ok(0)
}
