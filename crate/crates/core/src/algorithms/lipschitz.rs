//! Pure approximate well-supported equilibrium of a Lipschitz game from
//! approximate all-players queries.

use serde::Serialize;

use crate::algorithms::symmetric::ceil_log2;
use crate::error::{domain, Error, Result};
use crate::game::Strategy;
use crate::oracle::AllPlayersSource;

/// Which branch produced the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Nobody weakly prefers strategy 1 at count 0.
    AllTwo,
    /// Everybody weakly prefers strategy 1 at count `n - 1`.
    AllOne,
    /// Players with a clear preference are forced, the rest fill the target count.
    Margin,
    /// Used when the margin rule has no feasible target.
    TwoSided,
}

/// One bisection probe: `phi` at two counts, with `phi(left) > 0 >= phi(right)`
/// for the interval kept after the probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BisectionStep {
    pub left: usize,
    pub right: usize,
    pub phi_left: i64,
    pub phi_right: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzOutcome {
    pub profile: Vec<Strategy>,
    /// `x` with `phi(x) > 0 >= phi(x + 1)`, absent for the boundary branches.
    pub crossing: Option<usize>,
    pub ones: usize,
    /// Number of four-query probes issued (the endpoint probe included).
    pub probes: usize,
    pub construction: Construction,
    pub trace: Vec<BisectionStep>,
}

impl LipschitzOutcome {
    /// Approximate all-players queries issued.
    pub fn queries(&self) -> u64 {
        4 * self.probes as u64
    }
}

/// `4 ceil(log2 n)`.
pub fn lipschitz_query_budget(n: usize) -> u64 {
    4 * ceil_log2(n) as u64
}

/// Payoff differences `f_1(x) - f_2(x)` per player at one count.
struct Diff {
    d: Vec<f64>,
    br1: usize,
}

impl Diff {
    fn phi(&self, x: usize) -> i64 {
        self.br1 as i64 - x as i64
    }
}

fn diff<S: AllPlayersSource + ?Sized>(source: &mut S, x: usize) -> Result<Diff> {
    let f1 = source.query(Strategy::One, x)?;
    let f2 = source.query(Strategy::Two, x)?;
    let d: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a - b).collect();
    if d.iter().any(|v| v.is_nan()) {
        return Err(Error::Diagnostic(format!("oracle returned NaN at count {x}")));
    }
    // Ties go to strategy 1.
    let br1 = d.iter().filter(|&&v| v >= 0.0).count();
    Ok(Diff { d, br1 })
}

/// Pure profile that is a `3(lambda + delta)`-well-supported equilibrium of any
/// `lambda`-Lipschitz game whose payoffs `source` reports within `delta`.
///
/// Bisects on `phi(x) = BR_1(x) - x`, where `BR_1(x)` counts players weakly
/// preferring strategy 1 when `x` others play it. Every probe costs four queries.
pub fn lipschitz_pure_ne<S: AllPlayersSource + ?Sized>(source: &mut S, delta: f64) -> Result<LipschitzOutcome> {
    let n = source.n();
    if n < 2 {
        return Err(domain("at least two players are required"));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(domain(format!("delta = {delta} must be non-negative")));
    }
    let mut probes = 1;
    let mut lo_d = diff(source, 0)?;
    let mut hi_d = diff(source, n - 1)?;
    if lo_d.br1 == 0 {
        return Ok(boundary(n, Strategy::Two, probes));
    }
    if hi_d.br1 == n {
        return Ok(boundary(n, Strategy::One, probes));
    }
    let (mut lo, mut hi) = (0, n - 1);
    let mut trace = vec![BisectionStep {
        left: lo,
        right: hi,
        phi_left: lo_d.phi(lo),
        phi_right: hi_d.phi(hi),
    }];
    let (x, at_x, at_next) = loop {
        if hi - lo == 1 {
            break (lo, lo_d, hi_d);
        }
        let mid = (lo + hi - 1) / 2;
        let a = diff(source, mid)?;
        let b = diff(source, mid + 1)?;
        probes += 1;
        if a.phi(mid) <= 0 {
            hi = mid;
            hi_d = a;
        } else if b.phi(mid + 1) <= 0 {
            trace.push(BisectionStep {
                left: mid,
                right: mid + 1,
                phi_left: a.phi(mid),
                phi_right: b.phi(mid + 1),
            });
            break (mid, a, b);
        } else {
            lo = mid + 1;
            lo_d = b;
        }
        trace.push(BisectionStep {
            left: lo,
            right: hi,
            phi_left: lo_d.phi(lo),
            phi_right: hi_d.phi(hi),
        });
    };
    let (profile, construction) = construct(x, &at_x.d, &at_next.d, delta)?;
    let ones = crate::game::count_ones(&profile);
    Ok(LipschitzOutcome {
        profile,
        crossing: Some(x),
        ones,
        probes,
        construction,
        trace,
    })
}

fn boundary(n: usize, s: Strategy, probes: usize) -> LipschitzOutcome {
    LipschitzOutcome {
        profile: vec![s; n],
        crossing: None,
        ones: if s == Strategy::One { n } else { 0 },
        probes,
        construction: if s == Strategy::One {
            Construction::AllOne
        } else {
            Construction::AllTwo
        },
        trace: Vec::new(),
    }
}

/// Builds the profile at a crossing `x`, given differences at `x` and `x + 1`.
fn construct(x: usize, dx: &[f64], dnext: &[f64], delta: f64) -> Result<(Vec<Strategy>, Construction)> {
    let n = dx.len();
    let margin = 2.0 * delta;
    let forced_one = dx.iter().filter(|&&v| v > margin).count();
    let forced_two = dx.iter().filter(|&&v| -v > margin).count();
    let target = [x, x + 1].into_iter().find(|&t| forced_one <= t && t + forced_two <= n);
    if let Some(t) = target {
        let mut need = t - forced_one;
        let profile = dx
            .iter()
            .map(|&v| {
                if v > margin {
                    Strategy::One
                } else if -v > margin {
                    Strategy::Two
                } else if need > 0 {
                    need -= 1;
                    Strategy::One
                } else {
                    Strategy::Two
                }
            })
            .collect();
        return Ok((profile, Construction::Margin));
    }
    // Everyone preferring 1 at x + 1 plays 1; players preferring 1 at x top the
    // count up to x + 1.
    let mut profile: Vec<Strategy> = dnext
        .iter()
        .map(|&v| if v >= 0.0 { Strategy::One } else { Strategy::Two })
        .collect();
    let mut ones = crate::game::count_ones(&profile);
    for i in 0..n {
        if ones > x {
            break;
        }
        if profile[i] == Strategy::Two && dx[i] >= 0.0 {
            profile[i] = Strategy::One;
            ones += 1;
        }
    }
    if ones != x + 1 {
        return Err(Error::Diagnostic(format!(
            "no feasible profile at crossing {x}: {ones} players on strategy 1; the input is not consistent with a Lipschitz game"
        )));
    }
    Ok((profile, Construction::TwoSided))
}
