//! Approximate equilibrium of a general two-strategy game: solve the smoothed game
//! for a pure profile, then play it with a probability floor of zeta.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::lipschitz::{lipschitz_pure_ne, LipschitzOutcome};
use crate::algorithms::symmetric::ceil_log2;
use crate::error::{domain, Result};
use crate::game::{MixedProfile, Strategy};
use crate::oracle::{AccurateQueryConfig, AllPlayersSource, PayoffOracle, SampledSmoothedAllPlayers};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothedParams {
    pub zeta: f64,
    pub delta: f64,
    pub tau: f64,
    pub epsilon_target: f64,
}

fn log2n(n: usize) -> f64 {
    (n as f64).log2()
}

/// `zeta + delta + 1 / (zeta sqrt n)`.
pub fn epsilon_for(n: usize, zeta: f64, delta: f64) -> f64 {
    zeta + delta + 1.0 / (zeta * (n as f64).sqrt())
}

impl SmoothedParams {
    /// `zeta = delta = n^(-1/4)`, `tau = 1 / (16 log2 n)`.
    pub fn defaults(n: usize) -> Result<Self> {
        if n < 16 {
            return Err(domain(format!("n = {n}: default parameters need n >= 16")));
        }
        let z = (n as f64).powf(-0.25);
        Ok(SmoothedParams {
            zeta: z,
            delta: z,
            tau: 1.0 / (16.0 * log2n(n)),
            epsilon_target: epsilon_for(n, z, z),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0 && v <= 0.5;
        if !ok(self.zeta) {
            return Err(domain(format!("zeta = {} is outside (0, 1/2]", self.zeta)));
        }
        if !ok(self.delta) {
            return Err(domain(format!("delta = {} is outside (0, 1/2]", self.delta)));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(domain(format!("tau = {} is outside (0, 1)", self.tau)));
        }
        Ok(())
    }

    pub fn query_config(&self, n: usize) -> Result<AccurateQueryConfig> {
        AccurateQueryConfig::new(n, self.delta, self.tau)
    }
}

/// Parameters meeting `zeta + delta + 1 / (zeta sqrt n) <= epsilon`.
///
/// The first choice is `zeta = max(eps/3, 3/(eps sqrt n))` (at most 1/2) with
/// `delta = eps/3`. When that misses the target, `zeta = n^(-1/4)` (which
/// minimises `zeta + 1/(zeta sqrt n)`) is used with `delta = eps - 2 n^(-1/4)`.
pub fn derive_params(n: usize, epsilon: f64) -> Result<SmoothedParams> {
    if n < 2 {
        return Err(domain("at least two players are required"));
    }
    if !(epsilon.is_finite() && epsilon < 1.0) {
        return Err(domain(format!("epsilon = {epsilon} must be below 1")));
    }
    let root = (n as f64).sqrt();
    let floor = (n as f64).powf(-0.25);
    if epsilon < floor {
        return Err(domain(format!("epsilon = {epsilon} is below n^(-1/4) = {floor}")));
    }
    let tau = 1.0 / (16.0 * log2n(n));
    let zeta = (epsilon / 3.0).max(3.0 / (epsilon * root)).min(0.5);
    let delta = epsilon / 3.0;
    if epsilon_for(n, zeta, delta) <= epsilon + 1e-12 {
        return Ok(SmoothedParams {
            zeta,
            delta,
            tau,
            epsilon_target: epsilon,
        });
    }
    let delta = (epsilon - 2.0 * floor).min(0.5);
    if floor <= 0.5 && delta > 0.0 && epsilon_for(n, floor, delta) <= epsilon + 1e-12 {
        return Ok(SmoothedParams {
            zeta: floor,
            delta,
            tau,
            epsilon_target: epsilon,
        });
    }
    Err(domain(format!(
        "epsilon = {epsilon} is infeasible for n = {n}: zeta + delta + 1/(zeta sqrt n) exceeds it for every choice"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedOutcome {
    pub profile: MixedProfile,
    pub pure: LipschitzOutcome,
    pub zeta: f64,
    pub delta: f64,
    /// Samples per simulated query; 0 when an exact source was used.
    pub samples_per_query: usize,
}

/// Maps a pure profile of the smoothed game to the mixed profile of the original.
pub fn lift_profile(pure: &[Strategy], zeta: f64) -> MixedProfile {
    let probs = pure
        .iter()
        .map(|&s| match s {
            Strategy::One => 1.0 - zeta,
            Strategy::Two => zeta,
        })
        .collect();
    MixedProfile::new(probs).expect("zeta lies in (0, 1/2]")
}

/// Runs the pure-profile search against a source answering for the smoothed game
/// (within `delta`) and lifts the result.
pub fn smoothed_approx_ne_with<S: AllPlayersSource + ?Sized>(
    source: &mut S,
    zeta: f64,
    delta: f64,
) -> Result<SmoothedOutcome> {
    if !(zeta > 0.0 && zeta <= 0.5) {
        return Err(domain(format!("zeta = {zeta} is outside (0, 1/2]")));
    }
    let pure = lipschitz_pure_ne(source, delta)?;
    Ok(SmoothedOutcome {
        profile: lift_profile(&pure.profile, zeta),
        pure,
        zeta,
        delta,
        samples_per_query: 0,
    })
}

/// Approximate equilibrium of a general game from raw all-players queries, each
/// smoothed-game query simulated by sampling.
pub fn smoothed_approx_ne<O, R>(oracle: &mut O, params: &SmoothedParams, rng: &mut R) -> Result<SmoothedOutcome>
where
    O: PayoffOracle + ?Sized,
    R: Rng + ?Sized,
{
    let n = oracle.num_players();
    if n < 2 {
        return Err(domain("at least two players are required"));
    }
    params.validate()?;
    let cfg = params.query_config(n)?;
    let mut source = SampledSmoothedAllPlayers::new(oracle, params.zeta, cfg, rng);
    let mut out = smoothed_approx_ne_with(&mut source, params.zeta, params.delta)?;
    out.samples_per_query = cfg.samples_per_query;
    Ok(out)
}

/// Raw all-players query ceiling `4 ceil(log2 n) N`.
pub fn smoothed_query_budget(n: usize, cfg: &AccurateQueryConfig) -> u64 {
    4 * ceil_log2(n) as u64 * cfg.samples_per_query as u64
}

/// Union-bound failure probability `4 tau ceil(log2 n)`.
pub fn failure_budget(n: usize, tau: f64) -> f64 {
    4.0 * tau * ceil_log2(n) as f64
}
