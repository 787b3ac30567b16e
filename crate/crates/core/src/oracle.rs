//! Black-box payoff queries with cost accounting.
//!
//! Three query types are supported: a single payoff (cost 1), all players' payoffs
//! for one strategy and count (cost `n`), and all players' payoffs at one pure
//! profile (cost `n`). Adapters only ever charge through the oracle they wrap.

use std::borrow::Borrow;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::game::{count_ones, AnonymousGame, Strategy};
use crate::smoothing::smoothed_game_exact;

/// Running query totals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    #[serde(rename = "sp")]
    pub single_payoff_count: u64,
    #[serde(rename = "ap")]
    pub all_players_count: u64,
    #[serde(rename = "pr")]
    pub profile_count: u64,
    pub payoff_units: u64,
}

impl QueryLedger {
    pub fn charge_single(&mut self) {
        self.single_payoff_count += 1;
        self.payoff_units += 1;
    }

    pub fn charge_all_players(&mut self, n: usize) {
        self.all_players_count += 1;
        self.payoff_units += n as u64;
    }

    pub fn charge_profile(&mut self, n: usize) {
        self.profile_count += 1;
        self.payoff_units += n as u64;
    }

    /// Checks `payoff_units = sp + n (ap + pr)`.
    pub fn is_consistent(&self, n: usize) -> bool {
        self.payoff_units == self.single_payoff_count + n as u64 * (self.all_players_count + self.profile_count)
    }

    /// Queries issued since `earlier`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            single_payoff_count: self.single_payoff_count - earlier.single_payoff_count,
            all_players_count: self.all_players_count - earlier.all_players_count,
            profile_count: self.profile_count - earlier.profile_count,
            payoff_units: self.payoff_units - earlier.payoff_units,
        }
    }
}

/// Payoff access to a fixed two-strategy game. `x` is always the number of other
/// players on strategy 1.
pub trait PayoffOracle {
    fn num_players(&self) -> usize;

    fn single_payoff(&mut self, player: usize, strategy: Strategy, x: usize) -> Result<f64>;

    /// `u^i_j(x)` for every player `i`.
    fn all_players(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>>;

    /// Each player's payoff when everyone plays `a`.
    fn profile(&mut self, a: &[Strategy]) -> Result<Vec<f64>>;

    fn ledger(&self) -> QueryLedger;
}

impl<O: PayoffOracle + ?Sized> PayoffOracle for &mut O {
    fn num_players(&self) -> usize {
        (**self).num_players()
    }

    fn single_payoff(&mut self, player: usize, strategy: Strategy, x: usize) -> Result<f64> {
        (**self).single_payoff(player, strategy, x)
    }

    fn all_players(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>> {
        (**self).all_players(strategy, x)
    }

    fn profile(&mut self, a: &[Strategy]) -> Result<Vec<f64>> {
        (**self).profile(a)
    }

    fn ledger(&self) -> QueryLedger {
        (**self).ledger()
    }
}

/// Answers from a payoff table.
#[derive(Debug, Clone)]
pub struct TableOracle<G> {
    game: G,
    ledger: QueryLedger,
}

impl<G: Borrow<AnonymousGame>> TableOracle<G> {
    pub fn new(game: G) -> Result<Self> {
        game.borrow().require_two()?;
        Ok(TableOracle {
            game,
            ledger: QueryLedger::default(),
        })
    }

    pub fn game(&self) -> &AnonymousGame {
        self.game.borrow()
    }

    fn check_count(&self, x: usize) -> Result<()> {
        let n = self.game().n();
        if x >= n {
            return Err(domain(format!("count {x} is outside 0..={}", n - 1)));
        }
        Ok(())
    }
}

impl<G: Borrow<AnonymousGame>> PayoffOracle for TableOracle<G> {
    fn num_players(&self) -> usize {
        self.game().n()
    }

    fn single_payoff(&mut self, player: usize, strategy: Strategy, x: usize) -> Result<f64> {
        let v = self.game().payoff(player, strategy, x)?;
        self.ledger.charge_single();
        Ok(v)
    }

    fn all_players(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>> {
        self.check_count(x)?;
        let g = self.game.borrow();
        let out = (0..g.n()).map(|i| g.row2(i, strategy)[x]).collect();
        self.ledger.charge_all_players(g.n());
        Ok(out)
    }

    fn profile(&mut self, a: &[Strategy]) -> Result<Vec<f64>> {
        let g = self.game.borrow();
        let n = g.n();
        if a.len() != n {
            return Err(domain(format!("profile has {} entries for {n} players", a.len())));
        }
        let ones = count_ones(a);
        let out = a
            .iter()
            .enumerate()
            .map(|(i, &s)| g.row2(i, s)[ones - usize::from(s == Strategy::One)])
            .collect();
        self.ledger.charge_profile(n);
        Ok(out)
    }

    fn ledger(&self) -> QueryLedger {
        self.ledger
    }
}

/// Oracle over a borrowed game.
pub fn table_oracle(game: &AnonymousGame) -> Result<TableOracle<&AnonymousGame>> {
    TableOracle::new(game)
}

/// Oracle answering exactly from the zeta-smoothed game.
pub fn exact_smoothed_oracle(game: &AnonymousGame, zeta: f64) -> Result<TableOracle<AnonymousGame>> {
    TableOracle::new(smoothed_game_exact(game, zeta)?)
}

/// Simulates a profile query with one all-players query per strategy in use.
pub fn profile_via_all_players<O: PayoffOracle + ?Sized>(oracle: &mut O, a: &[Strategy]) -> Result<Vec<f64>> {
    let n = oracle.num_players();
    if a.len() != n {
        return Err(domain(format!("profile has {} entries for {n} players", a.len())));
    }
    let ones = count_ones(a);
    let mut out = vec![0.0; n];
    if ones > 0 {
        let v = oracle.all_players(Strategy::One, ones - 1)?;
        for (i, &s) in a.iter().enumerate() {
            if s == Strategy::One {
                out[i] = v[i];
            }
        }
    }
    if ones < n {
        let v = oracle.all_players(Strategy::Two, ones)?;
        for (i, &s) in a.iter().enumerate() {
            if s == Strategy::Two {
                out[i] = v[i];
            }
        }
    }
    Ok(out)
}

/// Simulates an all-players query with profile queries. Each profile places a
/// block of players on `strategy` so that each of them sees exactly `x` others on
/// strategy 1: `x + 1` players for strategy 1, `n - x` players for strategy 2.
pub fn all_players_via_profiles<O: PayoffOracle + ?Sized>(
    oracle: &mut O,
    strategy: Strategy,
    x: usize,
) -> Result<Vec<f64>> {
    let n = oracle.num_players();
    if x >= n {
        return Err(domain(format!("count {x} is outside 0..={}", n - 1)));
    }
    let block = match strategy {
        Strategy::One => x + 1,
        Strategy::Two => n - x,
    };
    let mut out = vec![0.0; n];
    let queries = n.div_ceil(block);
    for q in 0..queries {
        let start = (q * block).min(n - block);
        let mut a = vec![strategy.other(); n];
        for s in &mut a[start..start + block] {
            *s = strategy;
        }
        let v = oracle.profile(&a)?;
        out[start..start + block].copy_from_slice(&v[start..start + block]);
    }
    Ok(out)
}

/// Source of (possibly approximate) all-players answers.
pub trait AllPlayersSource {
    fn n(&self) -> usize;

    fn query(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>>;
}

impl<O: PayoffOracle + ?Sized> AllPlayersSource for O {
    fn n(&self) -> usize {
        self.num_players()
    }

    fn query(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>> {
        self.all_players(strategy, x)
    }
}

/// Adds independent uniform noise in `[-delta, delta]` to every answer.
#[derive(Debug)]
pub struct NoisyAllPlayers<O, R> {
    inner: O,
    delta: f64,
    rng: R,
}

impl<O: PayoffOracle, R: Rng> NoisyAllPlayers<O, R> {
    pub fn new(inner: O, delta: f64, rng: R) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(domain(format!("delta = {delta} must be non-negative")));
        }
        Ok(NoisyAllPlayers { inner, delta, rng })
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: PayoffOracle, R: Rng> AllPlayersSource for NoisyAllPlayers<O, R> {
    fn n(&self) -> usize {
        self.inner.num_players()
    }

    fn query(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>> {
        let mut v = self.inner.all_players(strategy, x)?;
        if self.delta > 0.0 {
            for p in &mut v {
                *p += self.rng.gen_range(-self.delta..=self.delta);
            }
        }
        Ok(v)
    }
}

/// Sample count for a delta-accurate query with failure probability tau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccurateQueryConfig {
    pub delta: f64,
    pub tau: f64,
    pub samples_per_query: usize,
}

impl AccurateQueryConfig {
    /// `N = ceil(ln(4n / tau) / (2 delta^2))`.
    pub fn new(n: usize, delta: f64, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("n must be at least 1"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(domain(format!("delta = {delta} is outside (0, 1)")));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(domain(format!("tau = {tau} is outside (0, 1)")));
        }
        let samples = ((4.0 * n as f64 / tau).ln() / (2.0 * delta * delta)).ceil();
        Ok(AccurateQueryConfig {
            delta,
            tau,
            samples_per_query: samples as usize,
        })
    }
}

/// Estimates the smoothed payoffs at `(strategy, x)` for all players from
/// `cfg.samples_per_query` all-players queries at random counts.
pub fn sampled_smoothed_all_players<O, R>(
    oracle: &mut O,
    strategy: Strategy,
    x: usize,
    zeta: f64,
    cfg: &AccurateQueryConfig,
    rng: &mut R,
) -> Result<Vec<f64>>
where
    O: PayoffOracle + ?Sized,
    R: Rng + ?Sized,
{
    let n = oracle.num_players();
    if x >= n {
        return Err(domain(format!("count {x} is outside 0..={}", n - 1)));
    }
    if !(zeta > 0.0 && zeta <= 0.5) {
        return Err(domain(format!("zeta = {zeta} is outside (0, 1/2]")));
    }
    if cfg.samples_per_query == 0 {
        return Err(domain("at least one sample per query is required"));
    }
    let mut sum = vec![0.0; n];
    for _ in 0..cfg.samples_per_query {
        let mut y = 0;
        for _ in 0..x {
            y += usize::from(rng.gen_bool(1.0 - zeta));
        }
        for _ in x..n - 1 {
            y += usize::from(rng.gen_bool(zeta));
        }
        let v = oracle.all_players(strategy, y)?;
        for (s, p) in sum.iter_mut().zip(&v) {
            *s += p;
        }
    }
    let inv = 1.0 / cfg.samples_per_query as f64;
    Ok(sum.into_iter().map(|s| s * inv).collect())
}

/// Delta-accurate answers for the smoothed game, built from raw queries.
pub struct SampledSmoothedAllPlayers<'a, O: ?Sized, R: ?Sized> {
    oracle: &'a mut O,
    zeta: f64,
    cfg: AccurateQueryConfig,
    rng: &'a mut R,
}

impl<'a, O: PayoffOracle + ?Sized, R: Rng + ?Sized> SampledSmoothedAllPlayers<'a, O, R> {
    pub fn new(oracle: &'a mut O, zeta: f64, cfg: AccurateQueryConfig, rng: &'a mut R) -> Self {
        SampledSmoothedAllPlayers { oracle, zeta, cfg, rng }
    }
}

impl<O: PayoffOracle + ?Sized, R: Rng + ?Sized> AllPlayersSource for SampledSmoothedAllPlayers<'_, O, R> {
    fn n(&self) -> usize {
        PayoffOracle::num_players(self.oracle)
    }

    fn query(&mut self, strategy: Strategy, x: usize) -> Result<Vec<f64>> {
        sampled_smoothed_all_players(self.oracle, strategy, x, self.zeta, &self.cfg, self.rng)
    }
}
