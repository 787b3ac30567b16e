//! Fixtures shared by the benchmarks.

use anonq_core::{gen_random, AnonymousGame, MixedProfile, RandomFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_probs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen()).collect()
}

pub fn random_profile(n: usize, seed: u64) -> MixedProfile {
    MixedProfile::new(random_probs(n, seed)).expect("uniform draws lie in [0, 1)")
}

/// Profile taking `distinct` probability values, spread evenly over the players.
pub fn grouped_profile(n: usize, distinct: usize) -> MixedProfile {
    let d = distinct.max(1);
    MixedProfile::new((0..n).map(|i| ((i % d) as f64 + 0.5) / d as f64).collect()).expect("values lie in (0, 1)")
}

pub fn general_game(n: usize, seed: u64) -> AnonymousGame {
    gen_random(n, RandomFamily::General, seed).expect("size within the generator guard")
}

pub fn lipschitz_game(n: usize, seed: u64) -> AnonymousGame {
    gen_random(n, RandomFamily::Lipschitz(1.0 / n as f64), seed).expect("size within the generator guard")
}
