//! Exact construction of the zeta-smoothed game.
//!
//! The smoothed payoff at count `x` is the expected payoff when `x` opponents play
//! strategy 1 with probability `1 - zeta` and the other `n - 1 - x` with probability
//! `zeta`. All players share the same count distributions, so the transform is one
//! `n x n` kernel applied to every payoff row.

use crate::distributions::pbd_iter;
use crate::error::{domain, Result};
use crate::game::AnonymousGame;

/// Row `x` holds the pmf of `Bin(x, 1 - zeta) + Bin(n - 1 - x, zeta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingKernel {
    n: usize,
    zeta: f64,
    rows: Vec<f64>,
}

impl SmoothingKernel {
    pub fn new(n: usize, zeta: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("n must be at least 1"));
        }
        if !(zeta.is_finite() && zeta > 0.0 && zeta <= 0.5) {
            return Err(domain(format!("zeta = {zeta} is outside (0, 1/2]")));
        }
        // binom[a] = Bin(a, zeta) for a = 0..n-1, stored as a triangle.
        let mut binom: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut cur = vec![1.0];
        for a in 0..n {
            binom.push(cur.clone());
            if a + 1 < n {
                cur = pbd_step(&cur, zeta);
            }
        }
        let mut rows = vec![0.0; n * n];
        for x in 0..n {
            // Bin(x, 1 - zeta)[i] = Bin(x, zeta)[x - i].
            let high = &binom[x];
            let low = &binom[n - 1 - x];
            let out = &mut rows[x * n..(x + 1) * n];
            for (i, &a) in high.iter().rev().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (l, &b) in low.iter().enumerate() {
                    out[i + l] += a * b;
                }
            }
        }
        Ok(SmoothingKernel { n, zeta, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Count distribution for `x` opponents on the high side.
    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x * self.n..(x + 1) * self.n]
    }

    /// Smoothed game of `game`, computed as one matrix product over all payoff rows.
    pub fn apply(&self, game: &AnonymousGame) -> Result<AnonymousGame> {
        game.require_two()?;
        let n = self.n;
        if game.n() != n {
            return Err(domain(format!("kernel built for n = {n}, game has n = {}", game.n())));
        }
        let m = 2 * game.num_classes();
        let mut u = Vec::with_capacity(m * n);
        for table in game.tables() {
            for row in table {
                u.extend_from_slice(row);
            }
        }
        let mut out = vec![0.0; m * n];
        // out[r][x] = sum_y u[r][y] * K[x][y]
        unsafe {
            matrixmultiply::dgemm(
                m,
                n,
                n,
                1.0,
                u.as_ptr(),
                n as isize,
                1,
                self.rows.as_ptr(),
                1,
                n as isize,
                0.0,
                out.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        for v in &mut out {
            *v = v.clamp(0.0, 1.0);
        }
        let tables = out
            .chunks(2 * n)
            .map(|t| vec![t[..n].to_vec(), t[n..].to_vec()])
            .collect();
        game.with_tables(tables)
    }
}

fn pbd_step(prev: &[f64], p: f64) -> Vec<f64> {
    let mut next = vec![0.0; prev.len() + 1];
    for (i, &m) in prev.iter().enumerate() {
        next[i] += (1.0 - p) * m;
        next[i + 1] += p * m;
    }
    next
}

/// The zeta-smoothed version of a two-strategy game.
pub fn smoothed_game_exact(game: &AnonymousGame, zeta: f64) -> Result<AnonymousGame> {
    game.require_two()?;
    SmoothingKernel::new(game.n(), zeta)?.apply(game)
}

/// Direct per-entry construction used to cross-check the kernel.
#[doc(hidden)]
pub fn smoothed_game_reference(game: &AnonymousGame, zeta: f64) -> Result<AnonymousGame> {
    game.require_two()?;
    if !(zeta > 0.0 && zeta <= 0.5) {
        return Err(domain(format!("zeta = {zeta} is outside (0, 1/2]")));
    }
    let n = game.n();
    let pmfs: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let probs = std::iter::repeat(1.0 - zeta)
                .take(x)
                .chain(std::iter::repeat(zeta).take(n - 1 - x));
            pbd_iter(n - 1, probs)
        })
        .collect();
    let tables = game
        .tables()
        .iter()
        .map(|t| {
            t.iter()
                .map(|row| {
                    pmfs.iter()
                        .map(|pmf| crate::distributions::dot(row, pmf).clamp(0.0, 1.0))
                        .collect()
                })
                .collect()
        })
        .collect();
    game.with_tables(tables)
}
