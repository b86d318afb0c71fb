//! Brute-force verification baseline: exhaustive grid search over the power
//! box for small instances. Deliberately independent of the solver path —
//! it evaluates the objective directly at every grid point.

use crate::error::{Error, Result};
use crate::network::Network;

/// Best grid point found. `points_evaluated` counts the points that passed
/// the minimum-rate filter and had their objective evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub p_best: Vec<f64>,
    pub objective_bps_hz: f64,
    pub points_evaluated: u64,
}

/// Evaluates the weighted throughput at every point of the uniform grid with
/// `resolution` points per axis (both endpoints included), skipping points
/// that violate a minimum-rate row. Ties are broken toward the
/// lexicographically smallest power vector; scanning in lexicographic order
/// makes that the first maximizer found.
///
/// Refused for more than four links — the point budget is `resolution^M`.
pub fn grid_search(net: &Network, resolution: usize) -> Result<GridResult> {
    let m = net.links();
    if m > 4 {
        return Err(Error::InvalidInput(format!(
            "grid search handles at most 4 links, got {m} (budget is resolution^links)"
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }

    let floors = net.rate_fraction_floors();
    let steps = (resolution - 1) as f64;
    let mut idx = vec![0usize; m];
    let mut p = vec![0.0; m];
    let mut frac = vec![0.0; m];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluated = 0u64;

    'outer: loop {
        for i in 0..m {
            p[i] = net.p_max()[i] * idx[i] as f64 / steps;
        }
        // fraction f_i/g_i inline; filter on rate floors
        let mut ok = true;
        for i in 0..m {
            let mut interf = net.noise()[i];
            for (j, pj) in p.iter().enumerate() {
                if j != i {
                    interf += net.gains()[(j, i)] * pj;
                }
            }
            frac[i] = (interf + net.gains()[(i, i)] * p[i]) / interf;
            if frac[i] < floors[i] {
                ok = false;
                break;
            }
        }
        if ok {
            evaluated += 1;
            let obj: f64 = frac
                .iter()
                .zip(net.weights())
                .map(|(f, w)| w * f.log2())
                .sum();
            if best.as_ref().is_none_or(|(b, _)| obj > *b) {
                best = Some((obj, p.clone()));
            }
        }
        // odometer, last axis fastest: lexicographic ascending order
        for d in (0..m).rev() {
            idx[d] += 1;
            if idx[d] < resolution {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }

    match best {
        Some((_, p_best)) => {
            // re-evaluate through the public objective so the reported value
            // matches weighted_throughput(net, p_best) bit for bit
            let objective_bps_hz = net.weighted_throughput(&p_best)?;
            Ok(GridResult {
                p_best,
                objective_bps_hz,
                points_evaluated: evaluated,
            })
        }
        None => Err(Error::Infeasible(
            "no grid point satisfies the minimum-rate constraints".into(),
        )),
    }
}
