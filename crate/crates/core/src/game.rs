//! Anonymous games, strategies and mixed profiles.

use std::collections::HashMap;
use std::sync::Arc;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::distributions::{Pmf, MAX_PMD_STRATEGIES};
use crate::error::{domain, scale, Error, Result};
use crate::partition;

/// Payoff excursions outside `[0, 1]` up to this size are clamped instead of rejected.
pub const PAYOFF_CLAMP_TOL: f64 = 1e-12;

/// Tolerance for class detection (symmetry, self-anonymity).
pub const CLASS_TOL: f64 = 1e-12;

/// One of the two strategies of a two-strategy game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    One,
    Two,
}

impl Strategy {
    pub const BOTH: [Strategy; 2] = [Strategy::One, Strategy::Two];

    /// Zero-based table index.
    pub fn index(self) -> usize {
        match self {
            Strategy::One => 0,
            Strategy::Two => 1,
        }
    }

    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            0 => Ok(Strategy::One),
            1 => Ok(Strategy::Two),
            _ => Err(domain(format!("strategy index {j} is not 0 or 1"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Strategy::One => Strategy::Two,
            Strategy::Two => Strategy::One,
        }
    }

    /// Probability of strategy 1 when this strategy is played purely.
    pub fn as_prob(self) -> f64 {
        match self {
            Strategy::One => 1.0,
            Strategy::Two => 0.0,
        }
    }
}

/// Number of players on strategy 1.
pub fn count_ones(profile: &[Strategy]) -> usize {
    profile.iter().filter(|&&s| s == Strategy::One).count()
}

/// An `n`-player anonymous game with `k` strategies.
///
/// Players that share a payoff table share storage, so a symmetric game holds a
/// single table regardless of `n`. Row `j` of a table is indexed by the opponent
/// partition: for `k = 2` this is the number `x` of other players on strategy 1;
/// for `k > 2` it is the lexicographic rank of the partition of the other
/// `n - 1` players.
#[derive(Debug, Clone, PartialEq)]
pub struct AnonymousGame {
    n: usize,
    k: usize,
    tables: Vec<Vec<Vec<f64>>>,
    class_of: Vec<usize>,
    opponents: Option<Arc<Vec<Vec<usize>>>>,
}

fn clean_payoff(v: f64, at: impl FnOnce() -> String) -> Result<f64> {
    if !v.is_finite() || !(-PAYOFF_CLAMP_TOL..=1.0 + PAYOFF_CLAMP_TOL).contains(&v) {
        return Err(domain(format!("payoff {v} at {} is outside [0, 1]", at())));
    }
    Ok(v.clamp(0.0, 1.0))
}

impl AnonymousGame {
    /// Builds a game from shared tables. `tables[c][j][x]` is the payoff of class `c`
    /// for strategy `j` at opponent partition `x`; `class_of[i]` names player `i`'s class.
    pub fn from_tables(n: usize, k: usize, mut tables: Vec<Vec<Vec<f64>>>, class_of: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(domain("a game needs at least one player"));
        }
        if k < 2 {
            return Err(domain(format!("k = {k}; at least two strategies are required")));
        }
        if k > MAX_PMD_STRATEGIES {
            return Err(scale(format!(
                "k = {k} exceeds the supported maximum of {MAX_PMD_STRATEGIES}"
            )));
        }
        if class_of.len() != n {
            return Err(domain(format!(
                "class assignment has {} entries for {n} players",
                class_of.len()
            )));
        }
        if let Some(&c) = class_of.iter().find(|&&c| c >= tables.len()) {
            return Err(domain(format!("class {c} has no table")));
        }
        let width = partition::partition_count(n - 1, k);
        for (c, table) in tables.iter_mut().enumerate() {
            if table.len() != k {
                return Err(domain(format!(
                    "table {c} has {} strategies, expected {k}",
                    table.len()
                )));
            }
            for (j, row) in table.iter_mut().enumerate() {
                if row.len() != width {
                    return Err(domain(format!(
                        "table {c}, strategy {j}: {} entries, expected {width}",
                        row.len()
                    )));
                }
                for (x, v) in row.iter_mut().enumerate() {
                    *v = clean_payoff(*v, || format!("table {c}, strategy {j}, x = {x}"))?;
                }
            }
        }
        let opponents = (k > 2).then(|| Arc::new(partition::partitions(n - 1, k)));
        Ok(AnonymousGame {
            n,
            k,
            tables,
            class_of,
            opponents,
        })
    }

    /// Builds a game from one table per player (`payoffs[i][j][x]`), merging
    /// bitwise-identical tables.
    pub fn from_player_payoffs(n: usize, k: usize, payoffs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if payoffs.len() != n {
            return Err(domain(format!("{} payoff tables for {n} players", payoffs.len())));
        }
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut tables = Vec::new();
        let mut class_of = Vec::with_capacity(n);
        for table in payoffs {
            let key: Vec<u64> = table
                .iter()
                .flat_map(|row| row.iter().map(|v| v.to_bits()))
                .chain(table.iter().map(|row| row.len() as u64))
                .collect();
            let c = *seen.entry(key).or_insert_with(|| {
                tables.push(table);
                tables.len() - 1
            });
            class_of.push(c);
        }
        Self::from_tables(n, k, tables, class_of)
    }

    /// Two-strategy game where every player uses `u1`, `u2` (length `n`).
    pub fn symmetric(n: usize, u1: Vec<f64>, u2: Vec<f64>) -> Result<Self> {
        Self::from_tables(n, 2, vec![vec![u1, u2]], vec![0; n])
    }

    /// Two-strategy game with one `(u1, u2)` pair per player.
    pub fn two_strategy(rows: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        let n = rows.len();
        Self::from_player_payoffs(n, 2, rows.into_iter().map(|(a, b)| vec![a, b]).collect())
    }

    /// Two-strategy game in which every payoff equals `value`.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::symmetric(n, vec![value; n], vec![value; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of entries in each payoff row.
    pub fn row_len(&self) -> usize {
        match &self.opponents {
            Some(p) => p.len(),
            None => self.n,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.tables.len()
    }

    pub fn class_of(&self, player: usize) -> usize {
        self.class_of[player]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    /// `tables()[c][j]` is class `c`'s payoff row for strategy `j`.
    pub fn tables(&self) -> &[Vec<Vec<f64>>] {
        &self.tables
    }

    /// Opponent partitions in row order for `k > 2`.
    pub fn opponent_partitions(&self) -> Option<&[Vec<usize>]> {
        self.opponents.as_deref().map(Vec::as_slice)
    }

    pub fn row(&self, player: usize, strategy: usize) -> &[f64] {
        &self.tables[self.class_of[player]][strategy]
    }

    pub(crate) fn row2(&self, player: usize, strategy: Strategy) -> &[f64] {
        self.row(player, strategy.index())
    }

    /// `u^i_j(x)` for a two-strategy game, with range checks.
    pub fn payoff(&self, player: usize, strategy: Strategy, x: usize) -> Result<f64> {
        self.require_two()?;
        self.check_player(player)?;
        if x >= self.n {
            return Err(domain(format!("count {x} is outside 0..={}", self.n - 1)));
        }
        Ok(self.row2(player, strategy)[x])
    }

    /// Payoff of `player` on strategy `j` against the opponent partition `x`.
    pub fn payoff_k(&self, player: usize, strategy: usize, x: &[usize]) -> Result<f64> {
        self.check_player(player)?;
        if strategy >= self.k {
            return Err(domain(format!("strategy {strategy} is outside 0..{}", self.k)));
        }
        let r = self
            .partition_rank(x)
            .ok_or_else(|| domain(format!("{x:?} is not a partition of {} into {}", self.n - 1, self.k)))?;
        Ok(self.row(player, strategy)[r])
    }

    fn partition_rank(&self, x: &[usize]) -> Option<usize> {
        if x.len() != self.k || x.iter().sum::<usize>() != self.n - 1 {
            return None;
        }
        match &self.opponents {
            Some(p) => partition::rank(p, x),
            None => Some(x[0]),
        }
    }

    pub(crate) fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.n {
            return Err(domain(format!("player {player} is outside 0..{}", self.n)));
        }
        Ok(())
    }

    pub(crate) fn require_two(&self) -> Result<()> {
        if self.k != 2 {
            return Err(domain(format!("operation needs k = 2, game has k = {}", self.k)));
        }
        Ok(())
    }

    /// Builds a game of the same shape whose class tables are `tables`.
    pub(crate) fn with_tables(&self, tables: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        Self::from_tables(self.n, self.k, tables, self.class_of.clone())
    }

    /// Expands to one table per player (the JSON layout).
    pub fn player_payoffs(&self) -> Vec<Vec<Vec<f64>>> {
        self.class_of.iter().map(|&c| self.tables[c].clone()).collect()
    }
}

// Serialization expands shared tables per player without cloning them.
impl Serialize for AnonymousGame {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Players<'a>(&'a AnonymousGame);
        impl Serialize for Players<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.n))?;
                for &c in &self.0.class_of {
                    seq.serialize_element(&self.0.tables[c])?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("AnonymousGame", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("payoffs", &Players(self))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    n: usize,
    k: usize,
    payoffs: Vec<Vec<Vec<f64>>>,
}

impl<'de> Deserialize<'de> for AnonymousGame {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = GameFile::deserialize(d)?;
        AnonymousGame::from_player_payoffs(f.n, f.k, f.payoffs).map_err(serde::de::Error::custom)
    }
}

/// Per-player probability of playing strategy 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile")]
pub struct MixedProfile {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    probs: Vec<f64>,
}

impl TryFrom<ProfileFile> for MixedProfile {
    type Error = Error;
    fn try_from(f: ProfileFile) -> Result<Self> {
        MixedProfile::new(f.probs)
    }
}

impl MixedProfile {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(domain(format!("probs[{i}] = {p} is outside [0, 1]")));
            }
        }
        Ok(MixedProfile { probs })
    }

    pub fn pure(strategies: &[Strategy]) -> Self {
        MixedProfile {
            probs: strategies.iter().map(|s| s.as_prob()).collect(),
        }
    }

    /// Everyone on strategy 1 with probability `p`.
    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The pure profile this represents, if every entry is 0 or 1.
    pub fn as_pure(&self) -> Option<Vec<Strategy>> {
        self.probs
            .iter()
            .map(|&p| {
                if p == 1.0 {
                    Some(Strategy::One)
                } else if p == 0.0 {
                    Some(Strategy::Two)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Validates rows of a k-strategy mixed profile.
pub fn check_rows(rows: &[Vec<f64>], k: usize) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(domain(format!("row {i} has {} entries, expected {k}", row.len())));
        }
        if row.iter().any(|p| !(p.is_finite() && (0.0..=1.0).contains(p))) {
            return Err(domain(format!("row {i} has an entry outside [0, 1]")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(domain(format!("row {i} sums to {s}")));
        }
    }
    Ok(())
}

/// `E[u^i_j(X)]` for a count distribution over `{0, ..., n - 1}`.
pub fn expected_payoff(game: &AnonymousGame, player: usize, strategy: Strategy, opponent_pmf: &Pmf) -> Result<f64> {
    game.require_two()?;
    game.check_player(player)?;
    if opponent_pmf.support_size() != game.n() {
        return Err(domain(format!(
            "opponent pmf has support size {}, expected {}",
            opponent_pmf.support_size(),
            game.n()
        )));
    }
    let v = opponent_pmf.expect(game.row2(player, strategy))?;
    Ok(v.clamp(0.0, 1.0))
}

/// Detected structural classes of a game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameClassFlags {
    pub symmetric: bool,
    pub self_anonymous: bool,
    pub self_symmetric: bool,
    pub step_lipschitz: f64,
}

/// Largest payoff change between neighbouring opponent partitions (one opponent
/// switching strategy). For `k = 2` this is `max |u(x) - u(x - 1)|`.
pub fn step_lipschitz_constant(game: &AnonymousGame) -> f64 {
    let mut best: f64 = 0.0;
    match game.opponent_partitions() {
        None => {
            for table in game.tables() {
                for row in table {
                    for w in row.windows(2) {
                        best = best.max((w[1] - w[0]).abs());
                    }
                }
            }
        }
        Some(parts) => {
            let k = game.k();
            for table in game.tables() {
                for row in table {
                    for (r, y) in parts.iter().enumerate() {
                        let mut z = y.clone();
                        for a in 0..k {
                            if y[a] == 0 {
                                continue;
                            }
                            for b in 0..k {
                                if a == b {
                                    continue;
                                }
                                z[a] -= 1;
                                z[b] += 1;
                                if let Some(s) = partition::rank(parts, &z) {
                                    best = best.max((row[s] - row[r]).abs());
                                }
                                z[a] += 1;
                                z[b] -= 1;
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

fn tables_close(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.iter()
        .zip(b)
        .all(|(r, s)| r.iter().zip(s).all(|(x, y)| (x - y).abs() <= CLASS_TOL))
}

fn table_self_anonymous(game: &AnonymousGame, table: &[Vec<f64>]) -> bool {
    match game.opponent_partitions() {
        None => (0..game.n() - 1).all(|x| (table[1][x + 1] - table[0][x]).abs() <= CLASS_TOL),
        Some(parts) => {
            // Payoffs must depend only on the partition of all n players.
            let totals = partition::partitions(game.n(), game.k());
            let mut value: Vec<Option<f64>> = vec![None; totals.len()];
            for (j, row) in table.iter().enumerate() {
                for (r, y) in parts.iter().enumerate() {
                    let mut z = y.clone();
                    z[j] += 1;
                    let t = partition::rank(&totals, &z).expect("total partition");
                    match value[t] {
                        None => value[t] = Some(row[r]),
                        Some(v) if (v - row[r]).abs() > CLASS_TOL => return false,
                        _ => {}
                    }
                }
            }
            true
        }
    }
}

pub fn classify(game: &AnonymousGame) -> GameClassFlags {
    let tables = game.tables();
    let symmetric = tables.iter().all(|t| tables_close(&tables[0], t));
    let self_anonymous = tables.iter().all(|t| table_self_anonymous(game, t));
    GameClassFlags {
        symmetric,
        self_anonymous,
        self_symmetric: symmetric && self_anonymous,
        step_lipschitz: step_lipschitz_constant(game),
    }
}
