//! Pure equilibrium of a symmetric two-strategy game by binary search.

use crate::error::{domain, Error, Result};
use crate::game::Strategy;
use crate::oracle::PayoffOracle;

/// Single-payoff query ceiling `4 ceil(log2 n) + 4`.
pub fn symmetric_query_budget(n: usize) -> u64 {
    4 * ceil_log2(n) as u64 + 4
}

pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

fn pair<O: PayoffOracle + ?Sized>(oracle: &mut O, x: usize) -> Result<(f64, f64)> {
    Ok((
        oracle.single_payoff(0, Strategy::One, x)?,
        oracle.single_payoff(0, Strategy::Two, x)?,
    ))
}

/// Number `m` of players on strategy 1 in a pure equilibrium of a symmetric game.
///
/// Only player 0's payoffs are queried. The all-2 and all-1 profiles are checked
/// first; otherwise `g(x) = u_1(x) - u_2(x)` is positive at 0 and negative at
/// `n - 1`, and bisection finds `m` with `g(m - 1) >= 0 > g(m)`. The answer is
/// checked against the queried values before it is returned.
pub fn symmetric_pne<O: PayoffOracle + ?Sized>(oracle: &mut O) -> Result<usize> {
    let n = oracle.num_players();
    if n == 0 {
        return Err(domain("game has no players"));
    }
    let (a1, a2) = pair(oracle, 0)?;
    if a2 >= a1 {
        return Ok(0);
    }
    if n == 1 {
        return verified(a1 >= a2, 1);
    }
    let (b1, b2) = pair(oracle, n - 1)?;
    if b1 >= b2 {
        return Ok(n);
    }
    let (mut lo, mut hi) = (0, n - 1);
    let (mut lo_val, mut hi_val) = ((a1, a2), (b1, b2));
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let v = pair(oracle, mid)?;
        if v.0 >= v.1 {
            lo = mid;
            lo_val = v;
        } else {
            hi = mid;
            hi_val = v;
        }
    }
    verified(lo_val.0 >= lo_val.1 && hi_val.1 >= hi_val.0, hi)
}

fn verified(ok: bool, m: usize) -> Result<usize> {
    if ok {
        Ok(m)
    } else {
        Err(Error::NotFound(format!(
            "count {m} failed the equilibrium check; the game is not symmetric or its payoffs are not comparable"
        )))
    }
}

/// Pure profile with the first `m` players on strategy 1.
pub fn profile_from_count(n: usize, m: usize) -> Vec<Strategy> {
    (0..n)
        .map(|i| if i < m { Strategy::One } else { Strategy::Two })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::AnonymousGame;
    use crate::oracle::table_oracle;

    fn run(g: &AnonymousGame) -> (Result<usize>, u64) {
        let mut o = table_oracle(g).unwrap();
        let m = symmetric_pne(&mut o);
        (m, o.ledger().single_payoff_count)
    }

    #[test]
    fn log2() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(4096), 12);
        assert_eq!(symmetric_query_budget(4096), 52);
    }

    #[test]
    fn examples() {
        let n = 4;
        let u1: Vec<f64> = (0..n).map(|x| x as f64 / (n - 1) as f64).collect();
        let u2: Vec<f64> = u1.iter().map(|v| 1.0 - v).collect();
        assert_eq!(run(&AnonymousGame::symmetric(n, u1, u2).unwrap()).0.unwrap(), 0);

        let g = AnonymousGame::symmetric(7, vec![1.0; 7], vec![0.0; 7]).unwrap();
        assert_eq!(run(&g).0.unwrap(), 7);

        let g = AnonymousGame::constant(7, 0.3).unwrap();
        let (m, q) = run(&g);
        assert_eq!(m.unwrap(), 0);
        assert_eq!(q, 2);
    }

    #[test]
    fn interior_crossing() {
        // Anti-coordination: strategy 1 pays while fewer than 5 others use it.
        let n = 12;
        let u1: Vec<f64> = (0..n).map(|x| if x < 5 { 1.0 } else { 0.0 }).collect();
        let g = AnonymousGame::symmetric(n, u1, vec![0.5; n]).unwrap();
        let (m, q) = run(&g);
        assert_eq!(m.unwrap(), 5);
        assert!(q <= symmetric_query_budget(n));
    }

    #[test]
    fn single_player() {
        let g = AnonymousGame::symmetric(1, vec![0.9], vec![0.1]).unwrap();
        assert_eq!(run(&g).0.unwrap(), 1);
    }
}
