//! Random games with a unique pure well-supported equilibrium whose location
//! encodes a hidden bit string.
//!
//! With `n = 2^k`, players `0..n-1` are split into consecutive groups of sizes
//! `n/2, n/4, ..., 1`; the last player is on its own. Group `j` (1-based) shares one
//! preference bit per block `{l n / 2^(j-1), ..., (l + 1) n / 2^(j-1) - 1}` of
//! opponent counts, and the last player has one bit per count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, scale, Error, Result};
use crate::game::{AnonymousGame, Strategy};

/// Largest supported `k` (`n = 2^k` players).
pub const MAX_LCP_K: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcpGameSpec {
    pub k: u32,
    /// `group_bits[j - 1][l]`: whether group `j` prefers strategy 1 on block `l`.
    pub group_bits: Vec<Vec<bool>>,
    /// Preference of the last player at each count.
    pub last_player_bits: Vec<bool>,
    pub seed: u64,
}

impl LcpGameSpec {
    pub fn n(&self) -> usize {
        1 << self.k
    }

    /// Size of group `j` (1-based).
    pub fn group_size(&self, j: usize) -> usize {
        self.n() >> j
    }

    /// First player of group `j` (1-based).
    pub fn group_start(&self, j: usize) -> usize {
        self.n() - (self.n() >> (j - 1))
    }

    /// Length of group `j`'s blocks.
    pub fn block_len(&self, j: usize) -> usize {
        self.n() >> (j - 1)
    }

    /// Group `j` (1-based) of a player, or `None` for the last player.
    pub fn group_of(&self, player: usize) -> Option<usize> {
        (1..=self.k as usize)
            .find(|&j| player >= self.group_start(j) && player < self.group_start(j) + self.group_size(j))
    }

    fn check(&self) -> Result<()> {
        if self.k == 0 || self.k > MAX_LCP_K {
            return Err(scale(format!("k = {} is outside 1..={MAX_LCP_K}", self.k)));
        }
        let ok = self.group_bits.len() == self.k as usize
            && self.group_bits.iter().enumerate().all(|(j, b)| b.len() == 1 << j)
            && self.last_player_bits.len() == self.n();
        if !ok {
            return Err(domain("bit vectors do not match k"));
        }
        Ok(())
    }
}

/// Draws the bits (group by group, block by block, then the last player) and
/// builds the game.
pub fn gen_lcp_game(k: u32, seed: u64) -> Result<(AnonymousGame, LcpGameSpec)> {
    if k == 0 || k > MAX_LCP_K {
        return Err(scale(format!("k = {k} is outside 1..={MAX_LCP_K}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group_bits = (0..k).map(|j| (0..1usize << j).map(|_| rng.gen()).collect()).collect();
    let last_player_bits = (0..1usize << k).map(|_| rng.gen()).collect();
    let spec = LcpGameSpec {
        k,
        group_bits,
        last_player_bits,
        seed,
    };
    Ok((lcp_game_from_spec(&spec)?, spec))
}

fn table_from_bits(bits: impl Iterator<Item = bool>) -> Vec<Vec<f64>> {
    let u1: Vec<f64> = bits.map(|b| if b { 1.0 } else { 0.0 }).collect();
    let u2 = u1.iter().map(|v| 1.0 - v).collect();
    vec![u1, u2]
}

pub fn lcp_game_from_spec(spec: &LcpGameSpec) -> Result<AnonymousGame> {
    spec.check()?;
    let n = spec.n();
    let mut tables = Vec::with_capacity(spec.k as usize + 1);
    let mut class_of = vec![0; n];
    for j in 1..=spec.k as usize {
        let len = spec.block_len(j);
        let bits = &spec.group_bits[j - 1];
        tables.push(table_from_bits((0..n).map(|x| bits[x / len])));
        let start = spec.group_start(j);
        class_of[start..start + spec.group_size(j)].fill(j - 1);
    }
    tables.push(table_from_bits(spec.last_player_bits.iter().copied()));
    class_of[n - 1] = spec.k as usize;
    AnonymousGame::from_tables(n, 2, tables, class_of)
}

/// The unique pure equilibrium, by resolving groups in order.
///
/// Once groups `1..j` are fixed at offset `s`, every count a member of group `j`
/// can see lies in `s..s + n / 2^(j-1)`, which must be a single block for the
/// group's preference to be dominant there.
pub fn lcp_equilibrium(spec: &LcpGameSpec) -> Result<Vec<Strategy>> {
    spec.check()?;
    let n = spec.n();
    let mut profile = vec![Strategy::Two; n];
    let mut offset = 0;
    for j in 1..=spec.k as usize {
        let len = spec.block_len(j);
        let (lo, hi) = (offset, offset + len - 1);
        if hi >= n || lo / len != hi / len {
            return Err(Error::Construction(format!(
                "group {j}: reachable counts {lo}..={hi} span more than one block"
            )));
        }
        let prefers_one = spec.group_bits[j - 1][lo / len];
        if prefers_one {
            let start = spec.group_start(j);
            profile[start..start + spec.group_size(j)].fill(Strategy::One);
            offset += spec.group_size(j);
        }
    }
    if spec.last_player_bits[offset] {
        profile[n - 1] = Strategy::One;
    }
    Ok(profile)
}

/// `Y_j = 1` iff group `j` plays strategy 1 in the equilibrium.
pub fn lcp_hidden_string(spec: &LcpGameSpec) -> Result<Vec<bool>> {
    let eq = lcp_equilibrium(spec)?;
    Ok((1..=spec.k as usize)
        .map(|j| eq[spec.group_start(j)] == Strategy::One)
        .collect())
}
