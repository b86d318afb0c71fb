//! Shared instance builders for the benchmark targets.

use mapel_core::{fixture, random_network, Fixture, Network, TopologySpec};

pub fn g1() -> Network {
    fixture(Fixture::G1)
}

pub fn random_pair(seed: u64) -> Network {
    random_network(&TopologySpec::new(2, seed)).expect("valid topology")
}
