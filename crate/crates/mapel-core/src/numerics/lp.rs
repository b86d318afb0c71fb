//! Epigraph max-min linear program.
//!
//! `solve_maxmin_lp` maximizes `min_i h_i(p)` over a box intersected with
//! affine half-spaces, where each `h_i` is affine. The epigraph form
//! `max t  s.t.  h_i(p) >= t` is solved with a dense two-phase primal
//! simplex using Bland's rule, which terminates on every input. The free
//! variable `t` is split into `t+ - t-`.
//!
//! Problem sizes here are tiny (tens of rows), so the implementation favors
//! clarity and exact nonnegativity of the shifted variables over speed.

use crate::error::{Error, Result};

/// Affine function `coeffs . p + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineRow {
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

impl AffineRow {
    pub fn new(coeffs: Vec<f64>, constant: f64) -> Self {
        AffineRow { coeffs, constant }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        self.coeffs.iter().zip(p).map(|(a, x)| a * x).sum::<f64>() + self.constant
    }
}

/// `max_p min_i h_i(p)` over `box_lower <= p <= box_upper` and
/// `extra_rows(p) >= 0`.
#[derive(Debug, Clone)]
pub struct MaxMinLpProblem {
    pub objective_rows: Vec<AffineRow>,
    pub box_lower: Vec<f64>,
    pub box_upper: Vec<f64>,
    pub extra_rows: Vec<AffineRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    InfeasiblePolytope,
}

/// Solution of a [`MaxMinLpProblem`]. `p_opt` and `value` are meaningful only
/// when `status == Optimal`; `value` is `min_i h_i(p_opt)` recomputed from the
/// original rows.
#[derive(Debug, Clone)]
pub struct MaxMinLpSolution {
    pub p_opt: Vec<f64>,
    pub value: f64,
    pub status: LpStatus,
}

impl MaxMinLpProblem {
    fn validate(&self) -> Result<()> {
        let m = self.box_lower.len();
        if self.box_upper.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.box_upper.len(),
            });
        }
        if self.objective_rows.is_empty() {
            return Err(Error::InvalidInput(
                "at least one objective row is required".into(),
            ));
        }
        for row in self.objective_rows.iter().chain(&self.extra_rows) {
            if row.coeffs.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.coeffs.len(),
                });
            }
        }
        for i in 0..m {
            if !(self.box_lower[i] <= self.box_upper[i]) {
                return Err(Error::InvalidInput(format!(
                    "box_lower[{i}] = {} exceeds box_upper[{i}] = {}",
                    self.box_lower[i], self.box_upper[i]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Rel {
    Le,
    Ge,
}

struct Tableau {
    ncols: usize,
    art_start: usize,
    rows: Vec<Vec<f64>>, // each row has ncols + 1 entries, rhs last
    basis: Vec<usize>,
    eps: f64,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Primal simplex, maximizing `costs . vars`, Bland's rule throughout.
    fn optimize(&mut self, costs: &[f64], allow_artificials: bool) -> Result<()> {
        let limit = if allow_artificials {
            self.ncols
        } else {
            self.art_start
        };
        loop {
            let m = self.rows.len();
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = costs[j];
                for r in 0..m {
                    let cb = costs[self.basis[r]];
                    if cb != 0.0 {
                        d -= cb * self.rows[r][j];
                    }
                }
                if d > self.eps {
                    entering = Some(j);
                    break; // Bland: lowest improving index
                }
            }
            let Some(c) = entering else { return Ok(()) };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = self.rows[r][c];
                if a > 1e-11 {
                    let ratio = self.rows[r][self.ncols] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio || (ratio == lratio && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Numerical(
                    "LP unbounded; the box should prevent this".into(),
                ));
            };
            self.pivot(r, c);
        }
    }

    fn value_of(&self, col: usize) -> f64 {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map_or(0.0, |r| self.rows[r][self.ncols])
    }
}

/// Maximizes `t` subject to `h_i(p) >= t` for every objective row, the extra
/// rows `>= 0`, and the box bounds. Returns the maximizer and the attained
/// `min_i h_i`, or `InfeasiblePolytope` when the constraints admit no point.
pub fn solve_maxmin_lp(prob: &MaxMinLpProblem, tol: f64) -> Result<MaxMinLpSolution> {
    prob.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let m = prob.box_lower.len();
    let eps = tol.clamp(1e-12, 1e-6);

    // variables: x_0..x_{m-1} (= p - lower), t+, t-
    let nstruct = m + 2;
    let tp = m;
    let tm = m + 1;

    // raw constraint rows over the structural variables
    let mut raw: Vec<(Vec<f64>, Rel, f64)> = Vec::new();
    for row in &prob.objective_rows {
        // a.x - t+ + t- >= -(a.lower + c)
        let mut coeffs = vec![0.0; nstruct];
        coeffs[..m].copy_from_slice(&row.coeffs);
        coeffs[tp] = -1.0;
        coeffs[tm] = 1.0;
        let rhs = -(row.eval(&prob.box_lower));
        raw.push((coeffs, Rel::Ge, rhs));
    }
    for row in &prob.extra_rows {
        let mut coeffs = vec![0.0; nstruct];
        coeffs[..m].copy_from_slice(&row.coeffs);
        let rhs = -(row.eval(&prob.box_lower));
        raw.push((coeffs, Rel::Ge, rhs));
    }
    for j in 0..m {
        let mut coeffs = vec![0.0; nstruct];
        coeffs[j] = 1.0;
        raw.push((coeffs, Rel::Le, prob.box_upper[j] - prob.box_lower[j]));
    }

    // normalize: equilibrate rows, then flip so ge-rows have rhs > 0
    for (coeffs, rel, rhs) in raw.iter_mut() {
        let scale = coeffs.iter().map(|a| a.abs()).fold(rhs.abs(), f64::max);
        if scale > 0.0 {
            for a in coeffs.iter_mut() {
                *a /= scale;
            }
            *rhs /= scale;
        }
        let flip = match rel {
            Rel::Ge => *rhs <= 0.0,
            Rel::Le => *rhs < 0.0,
        };
        if flip {
            for a in coeffs.iter_mut() {
                *a = -*a;
            }
            *rhs = -*rhs;
            *rel = if *rel == Rel::Ge { Rel::Le } else { Rel::Ge };
        }
    }

    let nrows = raw.len();
    let nslack = nrows; // one slack or surplus per row
    let nart = raw.iter().filter(|(_, rel, _)| *rel == Rel::Ge).count();
    let art_start = nstruct + nslack;
    let ncols = art_start + nart;

    let mut rows = Vec::with_capacity(nrows);
    let mut basis = Vec::with_capacity(nrows);
    let mut next_art = art_start;
    for (i, (coeffs, rel, rhs)) in raw.iter().enumerate() {
        let mut full = vec![0.0; ncols + 1];
        full[..nstruct].copy_from_slice(coeffs);
        full[ncols] = *rhs;
        match rel {
            Rel::Le => {
                full[nstruct + i] = 1.0;
                basis.push(nstruct + i);
            }
            Rel::Ge => {
                full[nstruct + i] = -1.0;
                full[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(full);
    }

    let mut tab = Tableau {
        ncols,
        art_start,
        rows,
        basis,
        eps,
    };

    // phase 1: drive the artificials to zero
    if nart > 0 {
        let mut costs = vec![0.0; ncols];
        for c in costs.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        tab.optimize(&costs, true)?;
        let infeas: f64 = (art_start..ncols).map(|c| tab.value_of(c)).sum();
        if infeas > 1000.0 * eps {
            return Ok(MaxMinLpSolution {
                p_opt: prob.box_lower.clone(),
                value: f64::NEG_INFINITY,
                status: LpStatus::InfeasiblePolytope,
            });
        }
        // pivot zero-level artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                let piv_col = (0..art_start)
                    .find(|&j| tab.rows[r][j].abs() > 1e-9 && !tab.basis.contains(&j));
                match piv_col {
                    Some(c) => tab.pivot(r, c),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // phase 2: maximize t+ - t-
    let mut costs = vec![0.0; ncols];
    costs[tp] = 1.0;
    costs[tm] = -1.0;
    tab.optimize(&costs, false)?;

    let p: Vec<f64> = (0..m)
        .map(|j| {
            let x = tab.value_of(j).max(0.0);
            (prob.box_lower[j] + x).clamp(prob.box_lower[j], prob.box_upper[j])
        })
        .collect();
    let value = prob
        .objective_rows
        .iter()
        .map(|row| row.eval(&p))
        .fold(f64::INFINITY, f64::min);

    Ok(MaxMinLpSolution {
        p_opt: p,
        value,
        status: LpStatus::Optimal,
    })
}
