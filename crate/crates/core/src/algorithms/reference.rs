//! Baseline strategies for the hidden-minority instance, used to compare the
//! cost of all-players and profile queries.

use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::oracle::PayoffOracle;

fn minority_profile(n: usize, h: usize) -> Vec<Strategy> {
    let mut a = vec![Strategy::One; n];
    a[h] = Strategy::Two;
    a
}

/// One all-players query at `(2, n - 1)` reveals the only player who gains by
/// deviating to strategy 2 when everyone else plays 1.
pub fn ap_probe<O: PayoffOracle + ?Sized>(oracle: &mut O) -> Result<Vec<Strategy>> {
    let n = oracle.num_players();
    let v = oracle.all_players(Strategy::Two, n - 1)?;
    let h = (0..n)
        .filter(|&i| v[i] > 0.5)
        .max_by(|&a, &b| v[a].total_cmp(&v[b]))
        .ok_or_else(|| Error::NotFound("no player prefers strategy 2 against n - 1 others on 1".into()))?;
    Ok(minority_profile(n, h))
}

/// Tries player `0, 1, ...` as the minority with one profile query each until
/// that player's payoff on strategy 2 beats the 1/2 available on strategy 1.
pub fn profile_scan<O: PayoffOracle + ?Sized>(oracle: &mut O) -> Result<Vec<Strategy>> {
    let n = oracle.num_players();
    for h in 0..n {
        let a = minority_profile(n, h);
        let v = oracle.profile(&a)?;
        if v[h] > 0.5 {
            return Ok(a);
        }
    }
    Err(Error::NotFound(
        "no profile with a single strategy-2 player is stable".into(),
    ))
}
