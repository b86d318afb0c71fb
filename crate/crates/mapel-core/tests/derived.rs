//! Regression tests against independently derived values: hand evaluations
//! of the closed-form quantities and grid/bisection oracles computed before
//! the solver was built.

use mapel_core::{
    fixture, grid_search, initial_vertex, maxmin_sinr, solve, Fixture, MapelStatus, SolverConfig,
};

/// Hand-evaluated per-link SINR of the G1 instance at full power.
#[test]
fn g1_sinr_at_full_power() {
    let net = fixture(Fixture::G1);
    let gamma = net.sinr(net.p_max()).unwrap();
    let expected = [
        23.261372397841175,
        63.70448548812666,
        1.9894295041193844,
        0.6483943546737575,
    ];
    for (g, e) in gamma.iter().zip(expected) {
        assert!((g - e).abs() <= 1e-12 * e, "gamma {g} vs {e}");
    }

    let frac = net.fraction_fg(net.p_max()).unwrap();
    for (f, e) in frac.iter().zip(expected) {
        assert!((f - (1.0 + e)).abs() <= 1e-12 * (1.0 + e));
    }

    let wt = net.weighted_throughput(net.p_max()).unwrap();
    assert!((wt - 2.5363743858049896).abs() < 1e-12);
}

/// Initial box corner of G1, evaluated by hand from the gain diagonal.
#[test]
fn g1_initial_vertex() {
    let net = fixture(Fixture::G1);
    let b = initial_vertex(&net);
    let expected = [3018.0, 2415.4, 3840.4, 635.0];
    for (bi, e) in b.iter().zip(expected) {
        assert!((bi - e).abs() <= 1e-9 * e, "b {bi} vs {e}");
    }
}

/// The G1 weighted-throughput optimum found by multi-scale grid refinement is
/// 4.655991; the reference value for delta = 0.1 is 4.655. The solver should
/// land within the certificate at every moderate delta.
#[test]
fn g1_solve_matches_reference_value() {
    let net = fixture(Fixture::G1);
    let cfg = SolverConfig {
        delta: 0.1,
        ..SolverConfig::default()
    };
    let r = solve(&net, &cfg).unwrap();
    assert_eq!(r.status, MapelStatus::Converged);
    assert!(
        (r.objective_bps_hz - 4.655).abs() <= 0.01,
        "objective {} not within 0.01 of 4.655",
        r.objective_bps_hz
    );
    assert!(r.objective_bps_hz <= r.upper_bound_bps_hz + 1e-9);
    // recovered power reproduces the accepted fraction vector
    let frac = net.fraction_fg(&r.p_star).unwrap();
    for (f, z) in frac.iter().zip(&r.z_star) {
        assert!(
            (f - z).abs() <= 1e-6 * z.abs().max(1.0),
            "fraction {f} vs z {z}"
        );
    }
}

/// Max-min SINR on G1: the balanced optimum from an independent bisection on
/// the Perron condition is 3.851277899971866 (all four SINRs equal, link 4 at
/// its cap); a coarse 30^4 grid reaches 3.7075054921179054.
#[test]
fn g1_maxmin_sinr_matches_bisection_and_grid() {
    let net = fixture(Fixture::G1);
    let (p, value) = maxmin_sinr(&net, &SolverConfig::default()).unwrap();
    let bisection = 3.851277899971866;
    assert!(
        (value - bisection).abs() <= 1e-3 * bisection,
        "value {value}"
    );

    // all SINRs balanced at the optimum
    let gamma = net.sinr(&p).unwrap();
    let spread = gamma.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - gamma.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 1e-3 * bisection, "gamma = {gamma:?}");

    // coarse in-test grid cross-check: the grid value is a lower bound and
    // must sit within its discretization slack of the solver value
    let grid = maxmin_grid(&net, 30);
    assert!((grid - 3.7075054921179054).abs() < 1e-9);
    assert!(grid <= value + 1e-9, "grid {grid} exceeds solver {value}");
    assert!(
        value <= grid * 1.05,
        "solver {value} too far above res-30 grid {grid}"
    );
}

/// Independent max-min SINR grid evaluator (test-only oracle).
fn maxmin_grid(net: &mapel_core::Network, res: usize) -> f64 {
    let m = net.links();
    let mut idx = vec![0usize; m];
    let mut best = f64::NEG_INFINITY;
    let steps = (res - 1) as f64;
    'outer: loop {
        let p: Vec<f64> = (0..m)
            .map(|i| net.p_max()[i] * idx[i] as f64 / steps)
            .collect();
        let worst = net
            .sinr(&p)
            .unwrap()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if worst > best {
            best = worst;
        }
        for d in (0..m).rev() {
            idx[d] += 1;
            if idx[d] < res {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    best
}

/// Grid refinement can only improve when the coarse grid is nested in the
/// fine one (resolutions R and 2R-1).
#[test]
fn nested_grid_refinement_never_loses() {
    let net = fixture(Fixture::G1);
    let coarse = grid_search(&net, 9).unwrap();
    let fine = grid_search(&net, 17).unwrap();
    assert!(fine.objective_bps_hz >= coarse.objective_bps_hz - 1e-12);
}
