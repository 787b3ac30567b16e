//! Seeded random game families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, scale, Result};
use crate::game::AnonymousGame;
use crate::partition;

/// Largest `n` for families that store one table per player.
pub const MAX_PER_PLAYER_N: usize = 4096;
/// Largest `n` for families with a single shared table.
pub const MAX_SHARED_N: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomFamily {
    /// Independent uniform payoffs.
    General,
    /// One uniform table shared by all players.
    Symmetric,
    /// Per player, uniform values `v(0..=n)` with `u_2(x) = v(x)`, `u_1(x) = v(x + 1)`.
    SelfAnonymous,
    /// Per player and strategy, a walk with uniform steps in `[-lambda, lambda]`,
    /// clamped to `[0, 1]`.
    Lipschitz(f64),
    /// Shared self-anonymous game paying 1 once more than `(n - 1) / 2` players
    /// (counting oneself) play strategy 1.
    StepSelfAnon,
}

fn uniform_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen()).collect()
}

fn walk(rng: &mut ChaCha8Rng, len: usize, lambda: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(len);
    let mut cur: f64 = rng.gen();
    for x in 0..len {
        if x > 0 {
            let step = if lambda > 0.0 {
                rng.gen_range(-lambda..=lambda)
            } else {
                0.0
            };
            cur = (cur + step).clamp(0.0, 1.0);
        }
        v.push(cur);
    }
    v
}

fn self_anon_table(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len() - 1;
    vec![v[1..].to_vec(), v[..n].to_vec()]
}

/// A seeded game from `family`; equal seeds give identical games.
pub fn gen_random(n: usize, family: RandomFamily, seed: u64) -> Result<AnonymousGame> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let shared = matches!(family, RandomFamily::Symmetric | RandomFamily::StepSelfAnon);
    let limit = if shared { MAX_SHARED_N } else { MAX_PER_PLAYER_N };
    if n > limit {
        return Err(scale(format!("n = {n} exceeds {limit} for this family")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        RandomFamily::General => {
            let tables = (0..n)
                .map(|_| vec![uniform_row(&mut rng, n), uniform_row(&mut rng, n)])
                .collect();
            AnonymousGame::from_tables(n, 2, tables, (0..n).collect())
        }
        RandomFamily::Symmetric => {
            let u1 = uniform_row(&mut rng, n);
            let u2 = uniform_row(&mut rng, n);
            AnonymousGame::symmetric(n, u1, u2)
        }
        RandomFamily::SelfAnonymous => {
            let tables = (0..n).map(|_| self_anon_table(&uniform_row(&mut rng, n + 1))).collect();
            AnonymousGame::from_tables(n, 2, tables, (0..n).collect())
        }
        RandomFamily::Lipschitz(lambda) => {
            if !(lambda.is_finite() && lambda >= 0.0) {
                return Err(domain(format!("lambda = {lambda} must be non-negative")));
            }
            let tables = (0..n)
                .map(|_| vec![walk(&mut rng, n, lambda), walk(&mut rng, n, lambda)])
                .collect();
            AnonymousGame::from_tables(n, 2, tables, (0..n).collect())
        }
        RandomFamily::StepSelfAnon => {
            let mid = (n - 1) / 2;
            let v: Vec<f64> = (0..=n).map(|c| if c > mid { 1.0 } else { 0.0 }).collect();
            AnonymousGame::from_tables(n, 2, vec![self_anon_table(&v)], vec![0; n])
        }
    }
}

/// Random self-anonymous game with `k` strategies: each player draws one value per
/// partition of all `n` players, and strategy `j` against opponents `y` pays the
/// value at `y + e_j`.
pub fn gen_random_selfanon_k(n: usize, k: usize, seed: u64) -> Result<AnonymousGame> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    if !(2..=4).contains(&k) {
        return Err(scale(format!("k = {k} is outside 2..=4")));
    }
    let limit = match k {
        2 => MAX_PER_PLAYER_N,
        3 => 80,
        _ => 40,
    };
    if n > limit {
        return Err(scale(format!("n = {n} exceeds {limit} for k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let totals = partition::partitions(n, k);
    let opponents = partition::partitions(n - 1, k);
    let targets: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            opponents
                .iter()
                .map(|y| {
                    let mut z = y.clone();
                    z[j] += 1;
                    partition::rank(&totals, &z).expect("total partition")
                })
                .collect()
        })
        .collect();
    let tables = (0..n)
        .map(|_| {
            let v = uniform_row(&mut rng, totals.len());
            targets.iter().map(|t| t.iter().map(|&r| v[r]).collect()).collect()
        })
        .collect();
    AnonymousGame::from_tables(n, k, tables, (0..n).collect())
}
