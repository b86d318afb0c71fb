//! On-disk instance format: a single JSON document mirroring the network
//! fields. Floats are written in shortest-round-trip form, so
//! `parse(serialize(x)) == x` holds exactly.

use mapel_core::Network;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Problem instance as stored on disk. `r_min_bps_hz` may be omitted and
/// defaults to all zeros. Unknown fields are rejected so typos surface with
/// line/column positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub gains: Vec<Vec<f64>>,
    pub noise_w: Vec<f64>,
    pub p_max_w: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_min_bps_hz: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("instance parse error: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    #[allow(dead_code)] // round-trip contract, exercised by tests
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Validates into a solver instance (weights get normalized there).
    pub fn to_network(&self) -> mapel_core::Result<Network> {
        let m = self.gains.len();
        Network::new(
            self.gains.clone(),
            self.noise_w.clone(),
            self.p_max_w.clone(),
            self.weights.clone(),
            self.r_min_bps_hz.clone().unwrap_or_else(|| vec![0.0; m]),
        )
    }
}
