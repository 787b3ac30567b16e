//! Exact count distributions: Poisson binomial and Poisson multinomial pmfs,
//! total variation distance, and the closed-form binomial mode bound.

use std::f64::consts::{E, PI};

use crate::error::{domain, scale, Result};
use crate::partition;

/// Absolute tolerance used for every probability comparison.
pub const PROB_TOL: f64 = 1e-12;

/// Largest strategy count supported by the multinomial routines.
pub const MAX_PMD_STRATEGIES: usize = 4;

/// Probability mass function of a count over `{0, ..., m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    mass: Vec<f64>,
}

impl Pmf {
    /// Validates that `mass` is a probability vector. Round-off below zero (down to
    /// `-1e-15`) is clamped.
    pub fn new(mut mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(domain("pmf needs at least one outcome"));
        }
        for (i, m) in mass.iter_mut().enumerate() {
            if !m.is_finite() || *m < -1e-15 || *m > 1.0 + PROB_TOL {
                return Err(domain(format!("mass[{i}] = {m} is not a probability")));
            }
            *m = m.clamp(0.0, 1.0);
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(domain(format!("masses sum to {total}, not 1")));
        }
        Ok(Pmf { mass })
    }

    /// Point mass at `at` over `{0, ..., support - 1}`.
    pub fn point(support: usize, at: usize) -> Self {
        assert!(at < support, "point mass outside the support");
        let mut mass = vec![0.0; support];
        mass[at] = 1.0;
        Pmf { mass }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Number of outcomes, `m + 1`.
    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    /// Largest single-outcome probability (the mass at the mode).
    pub fn max_mass(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &m) in self.mass.iter().enumerate() {
            if m > self.mass[best] {
                best = i;
            }
        }
        best
    }

    /// The distribution of `m - X`.
    pub fn reversed(&self) -> Pmf {
        let mut mass = self.mass.clone();
        mass.reverse();
        Pmf { mass }
    }

    /// `sum_x f(x) Pr[X = x]`.
    pub fn expect(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.mass.len() {
            return Err(domain(format!(
                "function has {} values but the pmf has support size {}",
                values.len(),
                self.mass.len()
            )));
        }
        Ok(dot(values, &self.mass))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }

    pub(crate) fn from_dp(mut mass: Vec<f64>) -> Self {
        for m in &mut mass {
            if *m < 0.0 {
                *m = 0.0;
            }
        }
        Pmf { mass }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain(format!("{what} = {p} is outside [0, 1]")))
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta.is_finite() && zeta > 0.0 && zeta <= 0.5 {
        Ok(())
    } else {
        Err(domain(format!("zeta = {zeta} is outside (0, 1/2]")))
    }
}

/// Adds one Bernoulli(`p`) coin to the count distribution held in `mass[..=coins]`.
#[inline]
fn add_coin(mass: &mut [f64], coins: usize, p: f64) {
    let q = 1.0 - p;
    mass[coins + 1] = p * mass[coins];
    for i in (1..=coins).rev() {
        mass[i] = q * mass[i] + p * mass[i - 1];
    }
    mass[0] *= q;
}

pub(crate) fn pbd_iter(len: usize, probs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut mass = vec![0.0; len + 1];
    mass[0] = 1.0;
    for (coins, p) in probs.into_iter().enumerate() {
        add_coin(&mut mass, coins, p);
    }
    mass
}

/// Distribution of a sum of independent Bernoulli variables with the given means,
/// built one coin at a time by the recursion
/// `Pr[S_n = i] = (1 - p_n) Pr[S_{n-1} = i] + p_n Pr[S_{n-1} = i - 1]`.
pub fn pbd_pmf(probs: &[f64]) -> Result<Pmf> {
    for (i, &p) in probs.iter().enumerate() {
        check_probability(p, &format!("probs[{i}]"))?;
    }
    Ok(Pmf::from_dp(pbd_iter(probs.len(), probs.iter().copied())))
}

/// `Binomial(n, p)` through the same recursion as [`pbd_pmf`].
pub fn binomial_pmf(n: usize, p: f64) -> Result<Pmf> {
    check_probability(p, "p")?;
    Ok(Pmf::from_dp(pbd_iter(n, std::iter::repeat(p).take(n))))
}

/// Count of `n_high` coins with mean `1 - zeta` plus `n_low` coins with mean `zeta`.
pub fn two_block_pmf(n_high: usize, n_low: usize, zeta: f64) -> Result<Pmf> {
    check_zeta(zeta)?;
    let probs = std::iter::repeat(1.0 - zeta)
        .take(n_high)
        .chain(std::iter::repeat(zeta).take(n_low));
    Ok(Pmf::from_dp(pbd_iter(n_high + n_low, probs)))
}

/// `(1/2) sum_i |a_i - b_i|`.
pub fn tv_distance(a: &Pmf, b: &Pmf) -> Result<f64> {
    if a.support_size() != b.support_size() {
        return Err(domain(format!(
            "support sizes differ: {} vs {}",
            a.support_size(),
            b.support_size()
        )));
    }
    let total: f64 = a.mass.iter().zip(&b.mass).map(|(x, y)| (x - y).abs()).sum();
    Ok((0.5 * total).min(1.0))
}

/// Upper bound `e / (2 pi zeta sqrt(n)) * (1 + 1 / (zeta n))` on the mode mass of
/// `Binomial(n, p)` for any `p` in `[zeta, 1 - zeta]`.
pub fn binomial_mode_bound(n: usize, zeta: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if !(zeta.is_finite() && zeta > 0.0 && zeta < 0.5) {
        return Err(domain(format!("zeta = {zeta} is outside (0, 1/2)")));
    }
    let n = n as f64;
    Ok(E / (2.0 * PI * zeta * n.sqrt()) * (1.0 + 1.0 / (zeta * n)))
}

/// Exact distribution of a sum of independent categorical vectors over the
/// partitions of `n` into `k` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionPmf {
    n: usize,
    k: usize,
    parts: Vec<Vec<usize>>,
    mass: Vec<f64>,
}

impl PartitionPmf {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Partitions in lexicographic order, aligned with [`PartitionPmf::mass`].
    pub fn partitions(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn get(&self, x: &[usize]) -> Option<f64> {
        partition::rank(&self.parts, x).map(|r| self.mass[r])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.parts.iter().map(Vec::as_slice).zip(self.mass.iter().copied())
    }
}

/// Poisson multinomial pmf of `rows.len()` independent players, player `i` choosing
/// strategy `j` with probability `rows[i][j]`. Players are added one at a time.
pub fn pmd_pmf(rows: &[Vec<f64>], k: usize) -> Result<PartitionPmf> {
    if k == 0 {
        return Err(domain("k must be positive"));
    }
    if k > MAX_PMD_STRATEGIES {
        return Err(scale(format!(
            "k = {k} exceeds the supported maximum of {MAX_PMD_STRATEGIES}"
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(domain(format!("row {i} has length {}, expected {k}", row.len())));
        }
        for (j, &p) in row.iter().enumerate() {
            check_probability(p, &format!("rows[{i}][{j}]"))?;
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(domain(format!("row {i} sums to {s}, not 1")));
        }
    }
    let n = rows.len();
    // Dense table over the first k - 1 coordinates, each in 0..=n; the last
    // coordinate is implied by the number of players added so far.
    let dims = k - 1;
    let side = n + 1;
    let mut strides = vec![1usize; dims];
    for d in (0..dims.saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * side;
    }
    let cells = side.pow(dims as u32);
    let mut cur = vec![0.0; cells];
    let mut next = vec![0.0; cells];
    cur[0] = 1.0;
    let reachable = partition::partitions(n, k);
    for (added, row) in rows.iter().enumerate() {
        next.iter_mut().for_each(|v| *v = 0.0);
        for x in partition::partitions(added, k) {
            let at: usize = (0..dims).map(|d| x[d] * strides[d]).sum();
            let m = cur[at];
            if m == 0.0 {
                continue;
            }
            for (j, &p) in row.iter().enumerate() {
                let to = if j < dims { at + strides[j] } else { at };
                next[to] += p * m;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mass = reachable
        .iter()
        .map(|x| {
            let at: usize = (0..dims).map(|d| x[d] * strides[d]).sum();
            cur[at].max(0.0)
        })
        .collect();
    Ok(PartitionPmf {
        n,
        k,
        parts: reachable,
        mass,
    })
}
