//! Proper vertex set of the outer polyblock approximation and its refinement
//! step.
//!
//! A polyblock is the union of the boxes `[0, v]` over a finite vertex set.
//! A vertex is proper when no other vertex dominates it componentwise; maxima
//! of increasing functions over the polyblock occur at proper vertices, so
//! only those are kept. Dominance comparisons are exact floating-point
//! comparisons: an epsilon here could delete boxes that still cover part of
//! the feasible region.
//!
//! The set also carries per-coordinate floors (the rate region `Theta`).
//! Children falling below a floor are dropped permanently: every point of
//! such a box lies outside `Theta`, so the box cannot contain the optimum.

use crate::error::{Error, Result};
use crate::network::Network;

/// Insertion-ordered collection of proper vertices. Storage is a flat list
/// with an `O(|T| * M)` dominance scan per insertion, which is fine at desk
/// scale; sets built with scoring weights additionally cache each vertex's
/// log-objective so the per-iteration argmax scan is a plain float compare.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    verts: Vec<Vec<f64>>,
    floors: Vec<f64>,
    score_weights: Vec<f64>,
    scores: Vec<f64>,
}

/// `a >= b` componentwise.
fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn log2_score(v: &[f64], weights: &[f64]) -> f64 {
    v.iter().zip(weights).map(|(z, w)| w * z.log2()).sum()
}

impl VertexSet {
    /// Starts from a single box corner with the given coordinate floors.
    /// Floors of zero disable the filtering entirely. `score_weights` are the
    /// objective weights used to cache per-vertex scores for selection.
    pub fn new(initial: Vec<f64>, floors: Vec<f64>, score_weights: Vec<f64>) -> Result<Self> {
        if initial.len() != floors.len() {
            return Err(Error::DimensionMismatch {
                expected: initial.len(),
                found: floors.len(),
            });
        }
        if initial.len() != score_weights.len() {
            return Err(Error::DimensionMismatch {
                expected: initial.len(),
                found: score_weights.len(),
            });
        }
        let mut set = VertexSet {
            verts: Vec::new(),
            floors,
            score_weights,
            scores: Vec::new(),
        };
        set.insert_proper(initial);
        Ok(set)
    }

    /// Builds a set from arbitrary vertices (no floors, no cached scores),
    /// pruning improper elements and duplicates.
    pub fn from_vertices(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let m = match vertices.first() {
            Some(v) => v.len(),
            None => return Err(Error::InvalidInput("vertex set cannot start empty".into())),
        };
        for v in &vertices {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
        }
        let scores = vec![0.0; vertices.len()];
        let mut set = VertexSet {
            verts: vertices,
            floors: vec![0.0; m],
            score_weights: Vec::new(),
            scores,
        };
        set.prune_improper();
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.verts
    }

    /// Removes dominated vertices and duplicate vectors, keeping the earliest
    /// insertion of each survivor. Idempotent.
    pub fn prune_improper(&mut self) {
        let n = self.verts.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let vi = &self.verts[i];
                let vj = &self.verts[j];
                if dominates(vj, vi) && (vj != vi || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut idx = 0;
        self.verts.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        let mut idx = 0;
        self.scores.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
    }

    /// True when some vertex dominates `point`, i.e. the point lies inside
    /// the polyblock.
    pub fn covers(&self, point: &[f64]) -> bool {
        self.verts.iter().any(|v| dominates(v, point))
    }

    /// Full pairwise properness scan, for diagnostics and tests.
    pub fn is_proper(&self) -> bool {
        let n = self.verts.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && dominates(&self.verts[j], &self.verts[i]) {
                    return false;
                }
            }
        }
        true
    }

    /// The vertex maximizing `Phi` among vertices inside the rate region
    /// (`v_i >= 2^{r_min_i}` for all `i`). Ties go to the lowest insertion
    /// index for reproducible traces; the comparison runs in log space, which
    /// is monotone in `Phi` and keeps power-of-two ties exact. `None` when no
    /// vertex qualifies.
    pub fn select_best(&self, net: &Network) -> Option<&[f64]> {
        let floors = net.rate_fraction_floors();
        let weights = net.weights();
        let cached = weights == self.score_weights.as_slice();
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.verts.iter().enumerate() {
            if v.len() != floors.len() || !dominates(v, &floors) {
                continue;
            }
            let log_phi = if cached {
                self.scores[i]
            } else {
                log2_score(v, weights)
            };
            if best.is_none_or(|(_, b)| log_phi > b) {
                best = Some((i, log_phi));
            }
        }
        best.map(|(i, _)| self.verts[i].as_slice())
    }

    /// Replaces `vertex` by its refinement children: child `j` equals the
    /// vertex with coordinate `j` lowered to `projection[j]`. Children below
    /// a floor are dropped; the rest are inserted with dominance pruning, so
    /// the result stays proper and the new polyblock still covers the part of
    /// the feasible set inside the rate region.
    pub fn replace_vertex(&mut self, vertex: &[f64], projection: &[f64]) -> Result<()> {
        let m = vertex.len();
        if projection.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: projection.len(),
            });
        }
        let Some(idx) = self.verts.iter().position(|v| v.as_slice() == vertex) else {
            return Err(Error::InvalidInput(
                "vertex to replace is not in the set".into(),
            ));
        };
        if !dominates(vertex, projection) {
            return Err(Error::InvalidInput(
                "projection must be componentwise below the vertex it refines".into(),
            ));
        }
        let old = self.verts.remove(idx);
        self.scores.remove(idx);
        // With the projection strictly below the vertex, the children are
        // pairwise incomparable and (since the set was proper) cannot
        // dominate any remaining vertex, so the reverse dominance sweep is
        // skipped. The degenerate case (some coordinate unchanged) takes the
        // general path.
        let strictly_below = old.iter().zip(projection).all(|(a, b)| b < a);
        for j in 0..m {
            let mut child = old.clone();
            child[j] = projection[j];
            self.insert_proper_impl(child, !strictly_below);
        }
        Ok(())
    }

    fn insert_proper(&mut self, v: Vec<f64>) {
        self.insert_proper_impl(v, true);
    }

    fn insert_proper_impl(&mut self, v: Vec<f64>, sweep_dominated: bool) {
        if !dominates(&v, &self.floors) {
            return; // outside Theta: its box cannot contain the optimum
        }
        if self.verts.iter().any(|o| dominates(o, &v)) {
            return; // dominated (or duplicate): improper
        }
        if sweep_dominated {
            let mut idx = 0;
            let verts = &mut self.verts;
            let scores = &mut self.scores;
            verts.retain(|o| {
                let keep = !dominates(&v, o);
                if !keep {
                    scores.remove(idx);
                } else {
                    idx += 1;
                }
                keep
            });
        }
        self.scores.push(if self.score_weights.is_empty() {
            0.0
        } else {
            log2_score(&v, &self.score_weights)
        });
        self.verts.push(v);
    }
}

/// Corner of the initial enclosing box: `b_i = 1 + G_ii p_max_i / n_i`, the
/// interference-free upper bound on each `f_i/g_i` over the power box.
pub fn initial_vertex(net: &Network) -> Vec<f64> {
    (0..net.links())
        .map(|i| 1.0 + net.gains()[(i, i)] * net.p_max()[i] / net.noise()[i])
        .collect()
}
