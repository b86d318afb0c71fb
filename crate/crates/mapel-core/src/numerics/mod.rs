//! Dense numerical kernels: Perron-root estimation, linear solves and the
//! epigraph max-min linear program used by the projection step.
//!
//! Everything here is self-contained dense linear algebra sized for desk-scale
//! problems (a handful of links). No sparse structures, no external solvers.

mod lp;

pub use lp::{solve_maxmin_lp, AffineRow, LpStatus, MaxMinLpProblem, MaxMinLpSolution};

use crate::error::{Error, Result};
use std::ops::{Index, IndexMut};

/// Default convergence tolerance for [`spectral_radius`].
pub const DEFAULT_POWER_TOL: f64 = 1e-10;
/// Default iteration cap for [`spectral_radius`].
pub const DEFAULT_POWER_MAX_ITER: usize = 10_000;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from nested rows. Ragged input is rejected.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `y = self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let y = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect();
        Ok(y)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Perron root of a nonnegative square matrix.
///
/// Power iteration with an all-ones start vector and a Rayleigh-quotient
/// convergence test. The iteration actually runs on `m + I`: for a
/// nonnegative matrix the shift moves the Perron root by exactly one and the
/// positive diagonal makes every irreducible block aperiodic, so the
/// iteration converges even for matrices like `[[0, a], [b, 0]]` where the
/// unshifted method cycles. A tiny additive jitter keeps the iterate strictly
/// positive on reducible matrices.
pub fn spectral_radius(m: &Matrix, tol: f64, max_iter: usize) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if m.data.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidInput(
            "matrix entries must be nonnegative".into(),
        ));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(0.0);
    }

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut prev = f64::INFINITY;
    let mut rayleigh = 0.0;
    for _it in 1..=max_iter {
        // y = (m + I) x
        let mut y = m.mul_vec(&x)?;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        rayleigh = xy / xx;
        if (rayleigh - prev).abs() < tol {
            return Ok((rayleigh - 1.0).max(0.0));
        }
        prev = rayleigh;
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        for i in 0..n {
            x[i] = y[i] / norm + 1e-15;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_estimate: (rayleigh - 1.0).max(0.0),
    })
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting and one
/// refinement pass. Rows are equilibrated first so the 1e-12 pivot threshold
/// is effectively relative.
pub fn solve_linear(a: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if rhs.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: rhs.len(),
        });
    }

    let mut x = gauss_solve(a, rhs)?;
    // one step of iterative refinement
    let ax = a.mul_vec(&x)?;
    let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
    if let Ok(dx) = gauss_solve(a, &r) {
        for i in 0..x.len() {
            x[i] += dx[i];
        }
    }

    let ax = a.mul_vec(&x)?;
    let resid = rhs
        .iter()
        .zip(&ax)
        .map(|(b, y)| (b - y).abs())
        .fold(0.0, f64::max);
    let rhs_inf = rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
    if resid > 1e-9 * (1.0 + rhs_inf) {
        return Err(Error::Numerical(format!(
            "linear solve residual {resid:.3e} exceeds 1e-9 * (1 + {rhs_inf:.3e})"
        )));
    }
    Ok(x)
}

fn gauss_solve(a: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    // augmented, row-equilibrated copy
    let mut aug = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        let mut scale = 0.0f64;
        for j in 0..n {
            scale = scale.max(a[(i, j)].abs());
        }
        if scale == 0.0 {
            return Err(Error::SingularMatrix { pivot: 0.0 });
        }
        for j in 0..n {
            aug[i][j] = a[(i, j)] / scale;
        }
        aug[i][n] = rhs[i] / scale;
    }

    for col in 0..n {
        let piv_row = (col..n)
            .max_by(|&r, &s| aug[r][col].abs().total_cmp(&aug[s][col].abs()))
            .expect("nonempty pivot range");
        let piv = aug[piv_row][col];
        if piv.abs() < 1e-12 {
            return Err(Error::SingularMatrix { pivot: piv.abs() });
        }
        aug.swap(col, piv_row);
        let pivot_row = aug[col].clone();
        for row in aug.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= factor * pv;
                }
            }
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = aug[i][n];
        for j in i + 1..n {
            s -= aug[i][j] * x[j];
        }
        x[i] = s / aug[i][i];
    }
    Ok(x)
}
