//! Problem instance: channel gains, noise, power caps, weights and rate
//! floors, plus SINR/throughput evaluation and the minimum-rate feasibility
//! check.
//!
//! Conventions: `gains[(i, j)]` is the dimensionless channel gain from
//! transmitter `i` to receiver `j`, so the interference seen by receiver `i`
//! sums column `i` of the gain matrix. All powers and noise are stored in
//! watts; rates are in bps/Hz.

use crate::error::{Error, Result};
use crate::numerics::{self, Matrix};

/// Immutable problem instance for `M` links.
///
/// Weights are normalized to sum to one at construction; everything else is
/// stored exactly as given (after validation).
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    gains: Matrix,
    noise: Vec<f64>,
    p_max: Vec<f64>,
    weights: Vec<f64>,
    r_min: Vec<f64>,
}

/// Why a rate vector is (in)feasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityReason {
    Feasible,
    SpectralRadiusExceedsOne,
    PowerCapViolated,
}

/// Outcome of the minimum-rate feasibility check.
///
/// `p_hat` is the minimal power vector meeting every rate floor with
/// equality; it is present whenever the linear system was solved (i.e. unless
/// the spectral-radius test already failed).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub spectral_radius_b: f64,
    pub p_hat: Option<Vec<f64>>,
    pub reason: FeasibilityReason,
}

impl Network {
    /// Validates and builds an instance. `gains` is row-major with
    /// `gains[i][j]` the gain from transmitter `i` to receiver `j`.
    pub fn new(
        gains: Vec<Vec<f64>>,
        noise: Vec<f64>,
        p_max: Vec<f64>,
        weights: Vec<f64>,
        r_min: Vec<f64>,
    ) -> Result<Self> {
        let m = gains.len();
        if m == 0 {
            return Err(Error::InvalidInput("at least one link is required".into()));
        }
        let gains = Matrix::from_rows(gains)?;
        if gains.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: gains.cols(),
            });
        }
        for (name, v) in [
            ("noise", &noise),
            ("p_max", &p_max),
            ("weights", &weights),
            ("r_min", &r_min),
        ] {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            if name != "r_min" {
                if let Some(i) = v.iter().position(|x| !(*x > 0.0)) {
                    return Err(Error::InvalidInput(format!(
                        "{name}[{i}] must be > 0, got {}",
                        v[i]
                    )));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                let g = gains[(i, j)];
                if !(g >= 0.0) || !g.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "gains[{i}][{j}] must be >= 0, got {g}"
                    )));
                }
            }
            if gains[(i, i)] <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "gains[{i}][{i}] must be > 0 (direct link gain), got {}",
                    gains[(i, i)]
                )));
            }
            if !(r_min[i] >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "r_min[{i}] must be >= 0, got {}",
                    r_min[i]
                )));
            }
        }
        let wsum: f64 = weights.iter().sum();
        let weights = weights.iter().map(|w| w / wsum).collect();
        Ok(Network {
            gains,
            noise,
            p_max,
            weights,
            r_min,
        })
    }

    pub fn links(&self) -> usize {
        self.noise.len()
    }

    pub fn gains(&self) -> &Matrix {
        &self.gains
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn p_max(&self) -> &[f64] {
        &self.p_max
    }

    /// Weights after normalization (they sum to one).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn r_min(&self) -> &[f64] {
        &self.r_min
    }

    /// Per-link floors `2^r_min_i` on the SINR-surrogate coordinates.
    pub fn rate_fraction_floors(&self) -> Vec<f64> {
        self.r_min.iter().map(|r| r.exp2()).collect()
    }

    fn check_len(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.links() {
            return Err(Error::DimensionMismatch {
                expected: self.links(),
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Interference-plus-noise at receiver `i`: `sum_{j != i} G_ji p_j + n_i`.
    fn interference(&self, p: &[f64], i: usize) -> f64 {
        let mut acc = self.noise[i];
        for (j, pj) in p.iter().enumerate() {
            if j != i {
                acc += self.gains[(j, i)] * pj;
            }
        }
        acc
    }

    /// Per-link SINR `gamma_i = G_ii p_i / (sum_{j != i} G_ji p_j + n_i)`.
    pub fn sinr(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p)?;
        Ok((0..p.len())
            .map(|i| self.gains[(i, i)] * p[i] / self.interference(p, i))
            .collect())
    }

    /// Weighted sum throughput `sum_i w_i log2(1 + gamma_i(p))` in bps/Hz.
    pub fn weighted_throughput(&self, p: &[f64]) -> Result<f64> {
        let gamma = self.sinr(p)?;
        Ok(gamma
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| w * (1.0 + g).log2())
            .sum())
    }

    /// Componentwise ratio `f_i(p) / g_i(p) = 1 + gamma_i(p)` where
    /// `f_i = G_ii p_i + sum_{j != i} G_ji p_j + n_i` and `g_i` drops the own
    /// signal term. Strictly positive thanks to positive noise.
    pub fn fraction_fg(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p)?;
        Ok((0..p.len())
            .map(|i| {
                let g = self.interference(p, i);
                (g + self.gains[(i, i)] * p[i]) / g
            })
            .collect())
    }

    /// Weighted geometric objective `Phi(z) = prod_i z_i^{w_i}`, increasing in
    /// every component.
    pub fn phi(&self, z: &[f64]) -> Result<f64> {
        self.check_len(z)?;
        if let Some(i) = z.iter().position(|x| !(*x > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "z[{i}] must be > 0, got {}",
                z[i]
            )));
        }
        Ok(z.iter()
            .zip(&self.weights)
            .map(|(zi, w)| zi.powf(*w))
            .product())
    }

    /// Minimum-rate feasibility check.
    ///
    /// Builds the SINR targets `gamma_min_i = 2^r_min_i - 1`, the coupling
    /// matrix `B` (zero diagonal, `B_ij = gamma_min_i G_ji / G_ii`) and
    /// `u_i = gamma_min_i n_i / G_ii`. The targets are infeasible when the
    /// Perron root of `B` reaches one; otherwise the minimal power meeting
    /// every target is `p_hat = (I - B)^{-1} u`, and the instance is feasible
    /// iff `p_hat` fits under the power caps.
    pub fn check_feasibility(&self) -> Result<FeasibilityReport> {
        let m = self.links();
        let gamma_min: Vec<f64> = self.r_min.iter().map(|r| r.exp2() - 1.0).collect();

        let mut b = Matrix::zeros(m, m);
        let mut u = vec![0.0; m];
        for i in 0..m {
            let gii = self.gains[(i, i)];
            for j in 0..m {
                if j != i {
                    b[(i, j)] = gamma_min[i] * self.gains[(j, i)] / gii;
                }
            }
            u[i] = gamma_min[i] * self.noise[i] / gii;
        }

        let rho = numerics::spectral_radius(
            &b,
            numerics::DEFAULT_POWER_TOL,
            numerics::DEFAULT_POWER_MAX_ITER,
        )?;
        if rho >= 1.0 - 1e-10 {
            return Ok(FeasibilityReport {
                feasible: false,
                spectral_radius_b: rho,
                p_hat: None,
                reason: FeasibilityReason::SpectralRadiusExceedsOne,
            });
        }

        let mut i_minus_b = Matrix::identity(m);
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    i_minus_b[(i, j)] = -b[(i, j)];
                }
            }
        }
        let mut p_hat = numerics::solve_linear(&i_minus_b, &u)?;
        // p_hat >= 0 holds mathematically (Neumann series); clear rounding dust
        let dust = 1e-12 * self.p_max.iter().fold(0.0f64, |a, &b| a.max(b));
        for p in p_hat.iter_mut() {
            if *p < 0.0 && *p > -dust {
                *p = 0.0;
            }
        }
        let within_caps = p_hat
            .iter()
            .zip(&self.p_max)
            .all(|(p, cap)| *p >= 0.0 && p <= cap);
        Ok(FeasibilityReport {
            feasible: within_caps,
            spectral_radius_b: rho,
            p_hat: Some(p_hat),
            reason: if within_caps {
                FeasibilityReason::Feasible
            } else {
                FeasibilityReason::PowerCapViolated
            },
        })
    }
}
