//! Exhaustive small-instance solvers used as independent references.

use crate::error::{domain, scale, Result};
use crate::game::{AnonymousGame, MixedProfile, Strategy};

pub const MAX_ENUM_PLAYERS: usize = 16;
pub const MAX_GRID_PLAYERS: usize = 3;

/// Whether pure profile `a` is an exact equilibrium, checked from the tables.
pub fn is_pure_ne(game: &AnonymousGame, a: &[Strategy]) -> bool {
    let ones = crate::game::count_ones(a);
    a.iter().enumerate().all(|(i, &s)| {
        let x = ones - usize::from(s == Strategy::One);
        game.row2(i, s)[x] >= game.row2(i, s.other())[x]
    })
}

/// Every pure equilibrium, in increasing order of the bitmask
/// `sum_i [a_i = 1] 2^i`.
pub fn enumerate_pure_ne(game: &AnonymousGame) -> Result<Vec<Vec<Strategy>>> {
    game.require_two()?;
    let n = game.n();
    if n > MAX_ENUM_PLAYERS {
        return Err(scale(format!("n = {n} exceeds {MAX_ENUM_PLAYERS} for enumeration")));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let a: Vec<Strategy> = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Strategy::One
                } else {
                    Strategy::Two
                }
            })
            .collect();
        if is_pure_ne(game, &a) {
            out.push(a);
        }
    }
    Ok(out)
}

fn grid_size(step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(domain(format!("grid step {step} is outside (0, 1]")));
    }
    Ok((1.0 / step).round().max(1.0) as usize)
}

fn check_grid_game(game: &AnonymousGame) -> Result<()> {
    game.require_two()?;
    if game.n() > MAX_GRID_PLAYERS {
        return Err(scale(format!(
            "n = {} exceeds {MAX_GRID_PLAYERS} for grid search",
            game.n()
        )));
    }
    Ok(())
}

/// `eps_ne` of a profile of at most three players, without allocation.
fn small_regret(game: &AnonymousGame, p: &[f64]) -> f64 {
    let n = p.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut pmf = [1.0, 0.0, 0.0];
        let mut coins = 0;
        for (l, &q) in p.iter().enumerate() {
            if l == i {
                continue;
            }
            pmf[coins + 1] = q * pmf[coins];
            for c in (1..=coins).rev() {
                pmf[c] = (1.0 - q) * pmf[c] + q * pmf[c - 1];
            }
            pmf[0] *= 1.0 - q;
            coins += 1;
        }
        let r1 = game.row(i, 0);
        let r2 = game.row(i, 1);
        let (mut e1, mut e2) = (0.0, 0.0);
        for x in 0..n {
            e1 += r1[x] * pmf[x];
            e2 += r2[x] * pmf[x];
        }
        let best = e1.max(e2);
        worst = worst.max(best - (p[i] * e1 + (1.0 - p[i]) * e2));
    }
    worst
}

/// Visits every grid point `{0, 1/m, ..., 1}^n` with its `eps_ne`.
fn for_each_grid_point(game: &AnonymousGame, m: usize, mut visit: impl FnMut(&[f64], f64)) {
    let n = game.n();
    let mut idx = vec![0usize; n];
    let mut p = vec![0.0; n];
    loop {
        for (q, &i) in p.iter_mut().zip(&idx) {
            *q = i as f64 / m as f64;
        }
        visit(&p, small_regret(game, &p));
        let mut d = 0;
        loop {
            if d == n {
                return;
            }
            idx[d] += 1;
            if idx[d] <= m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Grid point with the smallest `eps_ne` and that value. The grid has
/// `round(1 / grid_step) + 1` points per player; the first minimum found wins.
pub fn grid_search_min_regret(game: &AnonymousGame, grid_step: f64) -> Result<(MixedProfile, f64)> {
    check_grid_game(game)?;
    let m = grid_size(grid_step)?;
    let mut best = (vec![0.0; game.n()], f64::INFINITY);
    for_each_grid_point(game, m, |p, r| {
        if r < best.1 {
            best = (p.to_vec(), r);
        }
    });
    Ok((MixedProfile::new(best.0)?, best.1))
}

/// Grid points whose `eps_ne` is at most `eps`.
pub fn grid_points_within(game: &AnonymousGame, grid_step: f64, eps: f64) -> Result<Vec<MixedProfile>> {
    check_grid_game(game)?;
    let m = grid_size(grid_step)?;
    let mut out = Vec::new();
    for_each_grid_point(game, m, |p, r| {
        if r <= eps {
            out.push(MixedProfile::new(p.to_vec()).expect("grid point"));
        }
    });
    Ok(out)
}
