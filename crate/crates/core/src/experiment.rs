//! Seeded single-run experiments shared by the command line and the tests.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    ap_probe, derive_params, lipschitz_pure_ne, profile_from_count, profile_scan, smoothed_approx_ne,
    smoothed_approx_ne_with, symmetric_pne, uniform_mix, SmoothedParams,
};
use crate::equilibrium::{evaluate_profile, DEFAULT_SUPPORT_THRESHOLD};
use crate::error::{domain, Error, Result};
use crate::game::{AnonymousGame, MixedProfile};
use crate::generators::{
    gen_hidden_minority, gen_irrational3, gen_lcp_game, gen_majority_minority, gen_random, LcpGameSpec, RandomFamily,
};
use crate::oracle::{exact_smoothed_oracle, table_oracle, NoisyAllPlayers, PayoffOracle, QueryLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MajorityMinority,
    Irrational3,
    HiddenMinority,
    Lcp,
    RandomGeneral,
    RandomSymmetric,
    RandomSelfAnon,
    RandomLipschitz,
    StepSelfAnon,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::MajorityMinority,
        Family::Irrational3,
        Family::HiddenMinority,
        Family::Lcp,
        Family::RandomGeneral,
        Family::RandomSymmetric,
        Family::RandomSelfAnon,
        Family::RandomLipschitz,
        Family::StepSelfAnon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MajorityMinority => "majority-minority",
            Family::Irrational3 => "irrational3",
            Family::HiddenMinority => "hidden-minority",
            Family::Lcp => "lcp",
            Family::RandomGeneral => "random-general",
            Family::RandomSymmetric => "random-symmetric",
            Family::RandomSelfAnon => "random-selfanon",
            Family::RandomLipschitz => "random-lipschitz",
            Family::StepSelfAnon => "step-selfanon",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| domain(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    SymmetricPne,
    Lipschitz,
    Smoothed,
    Uniform,
    ProfileScan,
    ApProbe,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::SymmetricPne,
        Algorithm::Lipschitz,
        Algorithm::Smoothed,
        Algorithm::Uniform,
        Algorithm::ProfileScan,
        Algorithm::ApProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SymmetricPne => "symmetric-pne",
            Algorithm::Lipschitz => "lipschitz",
            Algorithm::Smoothed => "smoothed",
            Algorithm::Uniform => "uniform",
            Algorithm::ProfileScan => "profile-scan",
            Algorithm::ApProbe => "ap-probe",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| domain(format!("unknown algorithm {s:?}")))
    }
}

/// Per-family knobs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InstanceOptions {
    /// Step bound of `random-lipschitz`; `1/n` when absent.
    pub lambda: Option<f64>,
    /// Hidden player of `hidden-minority`; drawn from the seed when absent.
    pub hidden: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub game: AnonymousGame,
    pub lcp: Option<LcpGameSpec>,
    pub hidden: Option<usize>,
}

fn log2_exact(n: usize) -> Result<u32> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        Err(domain(format!("n = {n} must be a power of two for lcp")))
    }
}

/// Builds a game of `family` with `n` players from `seed`.
pub fn generate(family: Family, n: usize, seed: u64, opts: &InstanceOptions) -> Result<Instance> {
    let plain = |game| Instance {
        game,
        lcp: None,
        hidden: None,
    };
    Ok(match family {
        Family::MajorityMinority => plain(gen_majority_minority(n)?),
        Family::Irrational3 => {
            if n != 3 {
                return Err(domain(format!("irrational3 has 3 players, not {n}")));
            }
            plain(gen_irrational3())
        }
        Family::HiddenMinority => {
            if n == 0 {
                return Err(domain("n must be positive"));
            }
            let h = match opts.hidden {
                Some(h) => h,
                None => (ChaCha8Rng::seed_from_u64(seed).next_u64() % n as u64) as usize,
            };
            Instance {
                game: gen_hidden_minority(n, h)?,
                lcp: None,
                hidden: Some(h),
            }
        }
        Family::Lcp => {
            let (game, spec) = gen_lcp_game(log2_exact(n)?, seed)?;
            Instance {
                game,
                lcp: Some(spec),
                hidden: None,
            }
        }
        Family::RandomGeneral => plain(gen_random(n, RandomFamily::General, seed)?),
        Family::RandomSymmetric => plain(gen_random(n, RandomFamily::Symmetric, seed)?),
        Family::RandomSelfAnon => plain(gen_random(n, RandomFamily::SelfAnonymous, seed)?),
        Family::RandomLipschitz => {
            let lambda = opts.lambda.unwrap_or(1.0 / n.max(1) as f64);
            plain(gen_random(n, RandomFamily::Lipschitz(lambda), seed)?)
        }
        Family::StepSelfAnon => plain(gen_random(n, RandomFamily::StepSelfAnon, seed)?),
    })
}

/// Seed of trial `trial` at size `n`: a counter-indexed draw from the base stream.
pub fn trial_seed(base: u64, n: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(n as u64);
    rng.set_word_pos(2 * trial as u128);
    rng.next_u64()
}

/// Random stream for an algorithm run, separate from the stream that built the game.
pub fn algorithm_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Algorithm settings for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Target for `smoothed`; paper-default parameters (`zeta = delta = n^(-1/4)`) when absent.
    pub epsilon: Option<f64>,
    /// Query noise for `lipschitz`, or the accuracy assumed by `smoothed` with `exact`.
    pub delta: f64,
    /// Answer smoothed-game queries exactly instead of sampling.
    pub exact: bool,
    pub support_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            epsilon: None,
            delta: 0.0,
            exact: false,
            support_threshold: DEFAULT_SUPPORT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub profile: MixedProfile,
    pub ledger: QueryLedger,
    /// Smoothing parameters, for `smoothed` runs.
    pub params: Option<SmoothedParams>,
    pub wall_ms: u64,
}

fn smoothed_params(n: usize, opts: &SolveOptions) -> Result<SmoothedParams> {
    match opts.epsilon {
        Some(eps) => derive_params(n, eps),
        None => SmoothedParams::defaults(n),
    }
}

/// Runs `algorithm` on `game` behind a fresh oracle.
pub fn solve(game: &AnonymousGame, algorithm: Algorithm, seed: u64, opts: &SolveOptions) -> Result<SolveResult> {
    let n = game.n();
    let start = Instant::now();
    let mut rng = algorithm_rng(seed);
    let mut oracle = table_oracle(game)?;
    let mut params = None;
    let profile = match algorithm {
        Algorithm::SymmetricPne => MixedProfile::pure(&profile_from_count(n, symmetric_pne(&mut oracle)?)),
        Algorithm::Lipschitz => {
            if opts.delta > 0.0 {
                let mut noisy = NoisyAllPlayers::new(&mut oracle, opts.delta, &mut rng)?;
                MixedProfile::pure(&lipschitz_pure_ne(&mut noisy, opts.delta)?.profile)
            } else {
                MixedProfile::pure(&lipschitz_pure_ne(&mut oracle, 0.0)?.profile)
            }
        }
        Algorithm::Smoothed => {
            let p = smoothed_params(n, opts)?;
            params = Some(p);
            if opts.exact {
                // Exact answers for the smoothed game; the ledger stays empty because
                // no query to the original game is made.
                let mut exact = exact_smoothed_oracle(game, p.zeta)?;
                smoothed_approx_ne_with(&mut exact, p.zeta, 0.0)?.profile
            } else {
                smoothed_approx_ne(&mut oracle, &p, &mut rng)?.profile
            }
        }
        Algorithm::Uniform => uniform_mix(n),
        Algorithm::ProfileScan => MixedProfile::pure(&profile_scan(&mut oracle)?),
        Algorithm::ApProbe => MixedProfile::pure(&ap_probe(&mut oracle)?),
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    Ok(SolveResult {
        profile,
        ledger: oracle.ledger(),
        params,
        wall_ms,
    })
}

/// One benchmark row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub algorithm: String,
    #[serde(rename = "eps_target")]
    pub epsilon_target: Option<f64>,
    #[serde(rename = "regret")]
    pub measured_regret: f64,
    #[serde(rename = "ws_slack")]
    pub measured_ws_slack: f64,
    pub sp: u64,
    pub ap: u64,
    pub pr: u64,
    pub payoff_units: u64,
    #[serde(rename = "wall_ms")]
    pub wall_time_ms: u64,
}

pub const BENCH_HEADER: &str = "family,n,seed,algorithm,eps_target,regret,ws_slack,sp,ap,pr,payoff_units,wall_ms";

/// Generates the instance for `seed`, solves it and measures the result.
pub fn run_trial(
    family: Family,
    n: usize,
    seed: u64,
    algorithm: Algorithm,
    instance_opts: &InstanceOptions,
    opts: &SolveOptions,
) -> Result<BenchRecord> {
    let inst = generate(family, n, seed, instance_opts)?;
    let res = solve(&inst.game, algorithm, seed, opts)?;
    let report = evaluate_profile(&inst.game, &res.profile, opts.support_threshold)?;
    Ok(BenchRecord {
        family: family.name().to_string(),
        n,
        seed,
        algorithm: algorithm.name().to_string(),
        epsilon_target: match algorithm {
            Algorithm::Smoothed => res.params.map(|p| p.epsilon_target),
            _ => None,
        },
        measured_regret: report.eps_ne,
        measured_ws_slack: report.eps_wsne,
        sp: res.ledger.single_payoff_count,
        ap: res.ledger.all_players_count,
        pr: res.ledger.profile_count,
        payoff_units: res.ledger.payoff_units,
        wall_time_ms: res.wall_ms,
    })
}
