//! The zero-query uniform profile.

use crate::equilibrium::uniform_rows;
use crate::game::MixedProfile;

/// Every player mixes 1/2 - 1/2. No queries are issued.
pub fn uniform_mix(n: usize) -> MixedProfile {
    MixedProfile::new(vec![0.5; n]).expect("1/2 is a probability")
}

/// Every player uniform over `k` strategies, one row per player.
pub fn uniform_mix_k(n: usize, k: usize) -> Vec<Vec<f64>> {
    uniform_rows(n, k)
}
