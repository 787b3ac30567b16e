use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anonq_core::bruteforce::{enumerate_pure_ne, grid_search_min_regret, is_pure_ne, MAX_GRID_PLAYERS};
use anonq_core::experiment::{
    generate as generate_instance, run_trial, solve as run_solver, trial_seed, InstanceOptions, SolveOptions,
    BENCH_HEADER,
};
use anonq_core::{
    classify, evaluate_profile, Algorithm, AnonymousGame, BenchRecord, EquilibriumReport, Family, GameClassFlags,
    MixedProfile, QueryLedger, SmoothedParams, Strategy,
};
use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::{AlgoArgs, BenchArgs, GenerateArgs, SolveArgs, VerifyArgs};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_SCALE: u8 = 4;

/// Failures that are not library errors but still map to a specific exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let f = File::open(path).with_context(|| format!("opening {what} file {}", path.display()))?;
    serde_json::from_reader(BufReader::new(f))
        .map_err(|e| usage(format!("invalid {what} file {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn solve_options(a: &AlgoArgs) -> SolveOptions {
    SolveOptions {
        epsilon: a.epsilon,
        delta: a.delta,
        exact: a.exact,
        support_threshold: a.support_threshold,
    }
}

#[derive(Serialize)]
struct GenerateSummary<'a> {
    family: &'a str,
    n: usize,
    seed: u64,
    out: String,
    spec: Option<String>,
    hidden: Option<usize>,
    classes: GameClassFlags,
}

pub fn generate(a: GenerateArgs) -> Result<()> {
    let n = match (a.family, a.n, a.k) {
        (Family::Lcp, None, Some(k)) => 1usize
            .checked_shl(k)
            .filter(|_| k < 63)
            .ok_or_else(|| usage("k too large"))?,
        (Family::Lcp, Some(n), Some(k)) if 1usize.checked_shl(k) != Some(n) => {
            return Err(usage(format!("--n {n} and --k {k} disagree")));
        }
        (_, _, Some(_)) if a.family != Family::Lcp => return Err(usage("--k only applies to lcp")),
        (Family::Irrational3, None, _) => 3,
        (_, Some(n), _) => n,
        (_, None, _) => return Err(usage(format!("--n is required for {}", a.family))),
    };
    let opts = InstanceOptions {
        lambda: a.lambda,
        hidden: a.hidden,
    };
    let inst = generate_instance(a.family, n, a.seed, &opts)?;
    write_json(&a.out, &inst.game)?;
    let spec_path = match &inst.lcp {
        Some(spec) => {
            let p = a.out.with_extension("spec.json");
            write_json(&p, spec)?;
            Some(p.display().to_string())
        }
        None => None,
    };
    print_json(&GenerateSummary {
        family: a.family.name(),
        n,
        seed: a.seed,
        out: a.out.display().to_string(),
        spec: spec_path,
        hidden: inst.hidden,
        classes: classify(&inst.game),
    })
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    algorithm: &'a str,
    n: usize,
    seed: u64,
    profile: &'a MixedProfile,
    ledger: QueryLedger,
    params: Option<SmoothedParams>,
    report: &'a EquilibriumReport,
    wall_ms: u64,
}

pub fn solve(a: SolveArgs) -> Result<()> {
    let game: AnonymousGame = read_json(&a.game, "game")?;
    let res = run_solver(&game, a.algo.algorithm, a.seed, &solve_options(&a.algo))?;
    let report = evaluate_profile(&game, &res.profile, a.algo.support_threshold)?;
    if a.algo.algorithm == Algorithm::SymmetricPne {
        // Only player 0 was queried; a wrong answer means the game is not symmetric.
        let pure = res.profile.as_pure().expect("symmetric-pne returns a pure profile");
        if !is_pure_ne(&game, &pure) {
            let sym = classify(&game).symmetric;
            return Err(CliError::Verification(format!(
                "symmetric-pne returned a profile that is not a pure equilibrium (eps_ne = {}); game symmetric: {sym}",
                report.eps_ne
            ))
            .into());
        }
    }
    if let Some(out) = &a.out {
        write_json(out, &res.profile)?;
    }
    print_json(&SolveOutput {
        algorithm: a.algo.algorithm.name(),
        n: game.n(),
        seed: a.seed,
        profile: &res.profile,
        ledger: res.ledger,
        params: res.params,
        report: &report,
        wall_ms: res.wall_ms,
    })
}

#[derive(Serialize)]
struct GridResult {
    probs: Vec<f64>,
    eps_ne: f64,
    grid_step: f64,
}

#[derive(Serialize)]
struct VerifyOutput {
    report: EquilibriumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pure_equilibria: Option<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridResult>,
}

fn strategy_numbers(a: &[Strategy]) -> Vec<u8> {
    a.iter().map(|&s| s.index() as u8 + 1).collect()
}

pub fn verify(a: VerifyArgs) -> Result<()> {
    let game: AnonymousGame = read_json(&a.game, "game")?;
    let profile: MixedProfile = read_json(&a.profile, "profile")?;
    let report = evaluate_profile(&game, &profile, a.support_threshold)?;
    let mut out = VerifyOutput {
        report,
        pure_equilibria: None,
        grid: None,
    };
    if a.brute {
        let all = enumerate_pure_ne(&game)?;
        out.pure_equilibria = Some(all.iter().map(|p| strategy_numbers(p)).collect());
        if game.n() <= MAX_GRID_PLAYERS {
            let (p, r) = grid_search_min_regret(&game, a.grid_step)?;
            out.grid = Some(GridResult {
                probs: p.probs().to_vec(),
                eps_ne: r,
                grid_step: a.grid_step,
            });
        }
    }
    print_json(&out)?;
    if let Some(eps) = a.eps {
        let (name, v) = if a.well_supported {
            ("eps_wsne", out.report.eps_wsne)
        } else {
            ("eps_ne", out.report.eps_ne)
        };
        if v > eps {
            return Err(CliError::Verification(format!("{name} = {v} exceeds {eps}")).into());
        }
    }
    Ok(())
}

fn thread_count() -> Result<usize> {
    match std::env::var("ANONQ_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("ANONQ_THREADS = {v:?} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

pub fn bench(a: BenchArgs) -> Result<()> {
    if a.ns.is_empty() {
        return Err(usage("--ns needs at least one size"));
    }
    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .context("building worker pool")?;
    let opts = solve_options(&a.algo);
    let inst_opts = InstanceOptions {
        lambda: a.lambda,
        hidden: None,
    };
    let jobs: Vec<(usize, usize, u64)> =
        a.ns.iter()
            .flat_map(|&n| (0..a.trials).map(move |t| (n, t)))
            .map(|(n, t)| (n, t, trial_seed(a.seed, n, t)))
            .collect();
    let results: Vec<anonq_core::Result<BenchRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, _, seed)| run_trial(a.family, n, seed, a.algo.algorithm, &inst_opts, &opts))
            .collect()
    });

    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(sink));
    w.write_record(BENCH_HEADER.split(','))?;
    let mut first_err = None;
    for (&(n, t, seed), r) in jobs.iter().zip(results) {
        match r {
            Ok(rec) => w.serialize(&rec)?,
            Err(e) => {
                eprintln!("n = {n}, trial {t}, seed {seed}: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    w.flush()?;
    match first_err {
        Some(e) => Err(anyhow::Error::new(e).context("some benchmark runs failed")),
        None => Ok(()),
    }
}
