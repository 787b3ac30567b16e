//! Regret and well-supported slack of mixed profiles.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::distributions::{dot, pbd_iter, pmd_pmf};
use crate::error::{domain, scale, Result};
use crate::game::{check_rows, AnonymousGame, MixedProfile, Strategy};

/// Default probability above which a strategy counts as played.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-9;

/// Per-player regret and well-supported slack of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub regret: Vec<f64>,
    pub ws_slack: Vec<f64>,
    pub eps_ne: f64,
    pub eps_wsne: f64,
    pub support_threshold: f64,
}

impl EquilibriumReport {
    fn from_vectors(regret: Vec<f64>, ws_slack: Vec<f64>, support_threshold: f64) -> Self {
        let eps_ne = regret.iter().copied().fold(0.0, f64::max);
        let eps_wsne = ws_slack.iter().copied().fold(0.0, f64::max);
        EquilibriumReport {
            regret,
            ws_slack,
            eps_ne,
            eps_wsne,
            support_threshold,
        }
    }

    pub fn is_eps_ne(&self, eps: f64) -> bool {
        self.eps_ne <= eps
    }

    pub fn is_eps_wsne(&self, eps: f64) -> bool {
        self.eps_wsne <= eps
    }
}

/// Calls `visit(group, pmf)` once per group with the distribution of the number of
/// successes among every coin except one coin of that group. `groups[g] = (p, count)`.
///
/// Recursing on halves and adding the other half's coins keeps the total cost at
/// `O(m^2 log g)` for `m` coins.
fn leave_one_out(groups: &[(f64, usize)], visit: &mut impl FnMut(usize, &[f64])) {
    let total: usize = groups.iter().map(|g| g.1).sum();
    let mut acc = vec![0.0; total];
    if total == 0 {
        return;
    }
    acc[0] = 1.0;
    recurse(groups, 0, groups.len(), acc, 0, visit);
}

fn add_coins(acc: &mut [f64], mut coins: usize, p: f64, count: usize) -> usize {
    let q = 1.0 - p;
    for _ in 0..count {
        acc[coins + 1] = p * acc[coins];
        for i in (1..=coins).rev() {
            acc[i] = q * acc[i] + p * acc[i - 1];
        }
        acc[0] *= q;
        coins += 1;
    }
    coins
}

fn recurse(
    groups: &[(f64, usize)],
    lo: usize,
    hi: usize,
    acc: Vec<f64>,
    coins: usize,
    visit: &mut impl FnMut(usize, &[f64]),
) {
    if hi - lo == 1 {
        let mut acc = acc;
        let (p, count) = groups[lo];
        add_coins(&mut acc, coins, p, count - 1);
        for v in &mut acc {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        visit(lo, &acc);
        return;
    }
    let mid = (lo + hi) / 2;
    let mut left = acc.clone();
    let mut c = coins;
    for &(p, count) in &groups[mid..hi] {
        c = add_coins(&mut left, c, p, count);
    }
    recurse(groups, lo, mid, left, c, visit);
    let mut right = acc;
    let mut c = coins;
    for &(p, count) in &groups[lo..mid] {
        c = add_coins(&mut right, c, p, count);
    }
    recurse(groups, mid, hi, right, c, visit);
}

/// Regret and well-supported slack of a two-strategy mixed profile.
///
/// Players with bitwise-equal probabilities share one leave-one-out pmf, so
/// profiles with few distinct values (pure, uniform, smoothed outputs) are cheap.
pub fn evaluate_profile(
    game: &AnonymousGame,
    profile: &MixedProfile,
    support_threshold: f64,
) -> Result<EquilibriumReport> {
    game.require_two()?;
    let n = game.n();
    if profile.len() != n {
        return Err(domain(format!("profile has {} entries for {n} players", profile.len())));
    }
    if !(support_threshold.is_finite() && support_threshold >= 0.0) {
        return Err(domain(format!("support threshold {support_threshold} is negative")));
    }
    let probs = profile.probs();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, &p) in probs.iter().enumerate() {
        let g = *index.entry(p.to_bits()).or_insert_with(|| {
            groups.push((p, 0));
            members.push(Vec::new());
            groups.len() - 1
        });
        groups[g].1 += 1;
        members[g].push(i);
    }
    let mut regret = vec![0.0; n];
    let mut ws_slack = vec![0.0; n];
    leave_one_out(&groups, &mut |g, pmf| {
        let p = groups[g].0;
        let mut by_class: HashMap<usize, (f64, f64)> = HashMap::new();
        for &i in &members[g] {
            let (e1, e2) = *by_class.entry(game.class_of(i)).or_insert_with(|| {
                (
                    dot(game.row2(i, Strategy::One), pmf),
                    dot(game.row2(i, Strategy::Two), pmf),
                )
            });
            let (r, s) = player_gaps(&[e1, e2], &[p, 1.0 - p], support_threshold);
            regret[i] = r;
            ws_slack[i] = s;
        }
    });
    Ok(EquilibriumReport::from_vectors(regret, ws_slack, support_threshold))
}

/// `(regret, ws_slack)` of one player from expected payoffs per strategy and
/// the player's mixing probabilities.
fn player_gaps(values: &[f64], weights: &[f64], threshold: f64) -> (f64, f64) {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mixed: f64 = values.iter().zip(weights).map(|(v, w)| v * w).sum();
    let regret = (best - mixed).max(0.0);
    let mut slack = regret;
    for (v, &w) in values.iter().zip(weights) {
        if w > threshold {
            slack = slack.max(best - v);
        }
    }
    (regret, slack)
}

fn check_k_scale(game: &AnonymousGame) -> Result<()> {
    let limit = match game.k() {
        2 => usize::MAX,
        3 => 80,
        _ => 40,
    };
    if game.n() > limit {
        return Err(scale(format!(
            "n = {} exceeds the limit {limit} for k = {}",
            game.n(),
            game.k()
        )));
    }
    Ok(())
}

/// Regret and well-supported slack of a profile given as one probability row per
/// player, for any supported `k`.
pub fn evaluate_profile_k(
    game: &AnonymousGame,
    rows: &[Vec<f64>],
    support_threshold: f64,
) -> Result<EquilibriumReport> {
    let n = game.n();
    let k = game.k();
    if rows.len() != n {
        return Err(domain(format!("profile has {} rows for {n} players", rows.len())));
    }
    check_rows(rows, k)?;
    if game.opponent_partitions().is_none() {
        let probs = rows.iter().map(|r| r[0]).collect();
        return evaluate_profile(game, &MixedProfile::new(probs)?, support_threshold);
    }
    check_k_scale(game)?;
    let mut regret = vec![0.0; n];
    let mut ws_slack = vec![0.0; n];
    let mut cache: HashMap<Vec<Vec<u64>>, Vec<f64>> = HashMap::new();
    for i in 0..n {
        // Key the opponent pmf by the multiset of the other rows.
        let mut key: Vec<Vec<u64>> = rows
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != i)
            .map(|(_, r)| r.iter().map(|v| v.to_bits()).collect())
            .collect();
        key.sort_unstable();
        let pmf = match cache.get(&key) {
            Some(m) => m.clone(),
            None => {
                let others: Vec<Vec<f64>> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != i)
                    .map(|(_, r)| r.clone())
                    .collect();
                let m = pmd_pmf(&others, k)?.mass().to_vec();
                cache.insert(key, m.clone());
                m
            }
        };
        let values: Vec<f64> = (0..k).map(|j| dot(game.row(i, j), &pmf)).collect();
        let (r, s) = player_gaps(&values, &rows[i], support_threshold);
        regret[i] = r;
        ws_slack[i] = s;
    }
    Ok(EquilibriumReport::from_vectors(regret, ws_slack, support_threshold))
}

/// Everyone uniform over `k` strategies.
pub fn uniform_rows(n: usize, k: usize) -> Vec<Vec<f64>> {
    vec![vec![1.0 / k as f64; k]; n]
}

/// Largest gap `|E[u_j] - E[u_l]|` over players and strategy pairs when every
/// player mixes uniformly.
pub fn uniform_mix_regret_k(game: &AnonymousGame) -> Result<f64> {
    check_k_scale(game)?;
    let n = game.n();
    let k = game.k();
    let pmf: Vec<f64> = if k == 2 {
        pbd_iter(n - 1, std::iter::repeat(0.5).take(n - 1))
    } else {
        pmd_pmf(&uniform_rows(n - 1, k), k)?.mass().to_vec()
    };
    let mut worst: f64 = 0.0;
    for table in game.tables() {
        let values: Vec<f64> = table.iter().map(|row| dot(row, &pmf)).collect();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        worst = worst.max(hi - lo);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::pbd_pmf;
    use crate::game::count_ones;
    use crate::game::Strategy;
    use proptest::prelude::{any, prop, prop_assert, proptest};

    fn majority_minority(n: usize) -> AnonymousGame {
        let up: Vec<f64> = (0..n).map(|x| (2 * x + 1) as f64 / (2 * n) as f64).collect();
        let down: Vec<f64> = up.iter().map(|v| 1.0 - v).collect();
        let rows = (0..n)
            .map(|i| (if i < n / 2 { up.clone() } else { down.clone() }, vec![0.5; n]))
            .collect();
        AnonymousGame::two_strategy(rows).unwrap()
    }

    /// Regret of a pure profile straight from the tables.
    fn pure_regret(game: &AnonymousGame, a: &[Strategy]) -> Vec<f64> {
        let ones = count_ones(a);
        a.iter()
            .enumerate()
            .map(|(i, &s)| {
                let x = ones - usize::from(s == Strategy::One);
                let own = game.row2(i, s)[x];
                let alt = game.row2(i, s.other())[x];
                (alt - own).max(0.0)
            })
            .collect()
    }

    /// Per-player evaluation without grouping.
    fn naive(game: &AnonymousGame, probs: &[f64], thr: f64) -> (Vec<f64>, Vec<f64>) {
        let n = probs.len();
        let mut r = vec![0.0; n];
        let mut s = vec![0.0; n];
        for i in 0..n {
            let others: Vec<f64> = (0..n).filter(|&l| l != i).map(|l| probs[l]).collect();
            let pmf = pbd_pmf(&others).unwrap();
            let e1 = dot(game.row(i, 0), pmf.mass());
            let e2 = dot(game.row(i, 1), pmf.mass());
            let best = e1.max(e2);
            r[i] = (best - (probs[i] * e1 + (1.0 - probs[i]) * e2)).max(0.0);
            s[i] = r[i];
            if probs[i] > thr {
                s[i] = s[i].max(best - e1);
            }
            if 1.0 - probs[i] > thr {
                s[i] = s[i].max(best - e2);
            }
        }
        (r, s)
    }

    fn random_game(n: usize, seed: u64) -> AnonymousGame {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..n)
            .map(|_| {
                (
                    (0..n).map(|_| rng.gen::<f64>()).collect(),
                    (0..n).map(|_| rng.gen::<f64>()).collect(),
                )
            })
            .collect();
        AnonymousGame::two_strategy(rows).unwrap()
    }

    #[test]
    fn majority_minority_uniform_is_exact() {
        for n in [4, 10, 64] {
            let g = majority_minority(n);
            let rep = evaluate_profile(&g, &MixedProfile::constant(n, 0.5).unwrap(), 1e-9).unwrap();
            assert!(rep.eps_ne <= 1e-12, "n = {n}: {}", rep.eps_ne);
            assert!(rep.eps_wsne <= 1e-12);
        }
    }

    #[test]
    fn hidden_minority_profile() {
        let n = 6;
        let h = 2;
        let rows = (0..n)
            .map(|i| {
                let mut u2 = vec![0.0; n];
                if i == h {
                    u2[n - 1] = 1.0;
                }
                (vec![0.5; n], u2)
            })
            .collect();
        let g = AnonymousGame::two_strategy(rows).unwrap();
        let mut a = vec![Strategy::One; n];
        a[h] = Strategy::Two;
        let rep = evaluate_profile(&g, &MixedProfile::pure(&a), 1e-9).unwrap();
        assert_eq!(rep.eps_ne, 0.0);
        assert_eq!(rep.eps_wsne, 0.0);
    }

    #[test]
    fn rejects_mismatch() {
        let g = AnonymousGame::constant(3, 0.2).unwrap();
        assert!(evaluate_profile(&g, &MixedProfile::constant(2, 0.5).unwrap(), 0.0).is_err());
        assert!(evaluate_profile(&g, &MixedProfile::constant(3, 0.5).unwrap(), -1.0).is_err());
    }

    #[test]
    fn uniform_mix_step_game() {
        let n = 5;
        let v: Vec<f64> = (0..=n).map(|c| if c > (n - 1) / 2 { 1.0 } else { 0.0 }).collect();
        let g = AnonymousGame::symmetric(n, v[1..].to_vec(), v[..n].to_vec()).unwrap();
        assert!((uniform_mix_regret_k(&g).unwrap() - 0.375).abs() < 1e-12);
        let rep = evaluate_profile_k(&g, &uniform_rows(n, 2), 0.0).unwrap();
        assert!((rep.eps_wsne - 0.375).abs() < 1e-12);
    }

    #[test]
    fn k3_constant_and_guards() {
        let n = 4;
        let w = crate::partition::partition_count(n - 1, 3);
        let g = AnonymousGame::from_tables(n, 3, vec![vec![vec![0.4; w]; 3]], vec![0; n]).unwrap();
        assert_eq!(uniform_mix_regret_k(&g).unwrap(), 0.0);
        let rep = evaluate_profile_k(&g, &uniform_rows(n, 3), 1e-9).unwrap();
        assert!(rep.eps_wsne.abs() < 1e-12);

        let n = 81;
        let w = crate::partition::partition_count(n - 1, 3);
        let g = AnonymousGame::from_tables(n, 3, vec![vec![vec![0.4; w]; 3]], vec![0; n]).unwrap();
        assert!(matches!(
            uniform_mix_regret_k(&g),
            Err(crate::Error::UnsupportedScale(_))
        ));
    }

    #[test]
    fn k3_pure_profile_regret() {
        // Coordination on strategy index: payoff 1 when every opponent plays the same.
        let n = 3;
        let parts = crate::partition::partitions(n - 1, 3);
        let table: Vec<Vec<f64>> = (0..3)
            .map(|j| parts.iter().map(|y| if y[j] == n - 1 { 1.0 } else { 0.0 }).collect())
            .collect();
        let g = AnonymousGame::from_tables(n, 3, vec![table], vec![0; n]).unwrap();
        let all_first = vec![vec![1.0, 0.0, 0.0]; n];
        assert_eq!(evaluate_profile_k(&g, &all_first, 1e-9).unwrap().eps_wsne, 0.0);
        let mut split = all_first.clone();
        split[0] = vec![0.0, 1.0, 0.0];
        let rep = evaluate_profile_k(&g, &split, 1e-9).unwrap();
        assert_eq!(rep.regret[0], 1.0);
    }

    proptest! {
        #[test]
        fn grouped_matches_naive(
            n in 2usize..12,
            seed in any::<u64>(),
            raw in prop::collection::vec(prop::sample::select(vec![0.0, 0.25, 0.5, 1.0, 0.9, 0.13]), 12),
            thr in prop::sample::select(vec![0.0, 1e-9, 0.2]),
        ) {
            let g = random_game(n, seed);
            let probs = raw[..n].to_vec();
            let rep = evaluate_profile(&g, &MixedProfile::new(probs.clone()).unwrap(), thr).unwrap();
            let (r, s) = naive(&g, &probs, thr);
            for i in 0..n {
                prop_assert!((rep.regret[i] - r[i]).abs() <= 1e-12);
                prop_assert!((rep.ws_slack[i] - s[i]).abs() <= 1e-12);
                prop_assert!(rep.regret[i] <= rep.ws_slack[i] + 1e-12);
                prop_assert!(rep.regret[i] >= 0.0);
            }
        }

        #[test]
        fn distinct_probabilities_match_naive(n in 2usize..14, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let g = random_game(n, seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 7);
            let probs: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let rep = evaluate_profile(&g, &MixedProfile::new(probs.clone()).unwrap(), 0.0).unwrap();
            let (r, s) = naive(&g, &probs, 0.0);
            for i in 0..n {
                prop_assert!((rep.regret[i] - r[i]).abs() <= 1e-12);
                // Full support: slack is the spread between the two strategies.
                prop_assert!((rep.ws_slack[i] - s[i]).abs() <= 1e-12);
            }
        }

        #[test]
        fn pure_regret_matches_tables(n in 1usize..12, seed in any::<u64>(), bits in any::<u16>()) {
            let g = random_game(n, seed);
            let a: Vec<Strategy> = (0..n)
                .map(|i| if bits >> i & 1 == 1 { Strategy::One } else { Strategy::Two })
                .collect();
            let rep = evaluate_profile(&g, &MixedProfile::pure(&a), 1e-9).unwrap();
            let direct = pure_regret(&g, &a);
            for (i, d) in direct.iter().enumerate() {
                prop_assert!((rep.regret[i] - d).abs() <= 1e-12);
                prop_assert!((rep.ws_slack[i] - d).abs() <= 1e-12);
            }
        }

        #[test]
        fn k2_row_form_agrees(n in 2usize..9, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let g = random_game(n, seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let probs: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let rows: Vec<Vec<f64>> = probs.iter().map(|&p| vec![p, 1.0 - p]).collect();
            let a = evaluate_profile(&g, &MixedProfile::new(probs).unwrap(), 1e-9).unwrap();
            // Forcing the partition path through pmd_pmf with k = 2.
            let others_path: Vec<f64> = (0..n).map(|i| {
                let others: Vec<Vec<f64>> = rows.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, r)| r.clone()).collect();
                let pmf = pmd_pmf(&others, 2).unwrap();
                // Lexicographic order puts x_1 ascending, matching the row index.
                let e: Vec<f64> = (0..2).map(|j| dot(g.row(i, j), pmf.mass())).collect();
                player_gaps(&e, &rows[i], 1e-9).0
            }).collect();
            for (r, o) in a.regret.iter().zip(&others_path) {
                prop_assert!((r - o).abs() <= 1e-12);
            }
        }
    }
}
