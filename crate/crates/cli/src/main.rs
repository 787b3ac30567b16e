//! `anonq`: generate anonymous games, run the query algorithms, verify profiles
//! and produce benchmark tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use anonq_core::{Algorithm, Family};
use clap::{Args, Parser, Subcommand};

use commands::{CliError, EXIT_OTHER, EXIT_SCALE, EXIT_USAGE, EXIT_VERIFY};

#[derive(Parser, Debug)]
#[command(name = "anonq", version, about = "Equilibria of anonymous games from payoff queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a game file for one of the instance families.
    Generate(GenerateArgs),
    /// Run an algorithm on a game file and report the profile, ledger and quality.
    Solve(SolveArgs),
    /// Measure a profile's regret and well-supported slack.
    Verify(VerifyArgs),
    /// Seeded trials over several sizes, one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Number of players (3 for irrational3; a power of two for lcp).
    #[arg(long)]
    n: Option<usize>,
    /// lcp only: n = 2^k.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random-lipschitz step bound (default 1/n).
    #[arg(long)]
    lambda: Option<f64>,
    /// hidden-minority: 0-based hidden player (default drawn from the seed).
    #[arg(long)]
    hidden: Option<usize>,
    /// Game file; lcp also writes `<stem>.spec.json` beside it.
    #[arg(long, default_value = "game.json")]
    out: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct AlgoArgs {
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// smoothed: target epsilon (parameters derived from it); defaults to zeta = delta = n^(-1/4).
    #[arg(long)]
    epsilon: Option<f64>,
    /// lipschitz: injected query noise.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// smoothed: answer smoothed-game queries exactly instead of sampling.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = anonq_core::DEFAULT_SUPPORT_THRESHOLD)]
    support_threshold: f64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Profile file to write (the full result goes to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, default_value_t = anonq_core::DEFAULT_SUPPORT_THRESHOLD)]
    support_threshold: f64,
    /// Also enumerate pure equilibria (n <= 16) and grid-search the best mixed profile (n <= 3).
    #[arg(long)]
    brute: bool,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Exit with status 3 unless eps_ne (or eps_wsne with --well-supported) is at most this.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, requires = "eps")]
    well_supported: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Comma-separated player counts.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Base seed; each (n, trial) gets its own derived seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<f64>,
    /// CSV file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: anonq_core::Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: anonq_core::Error| e.to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<anonq_core::Error>() {
            return match e {
                anonq_core::Error::Domain(_) => EXIT_USAGE,
                anonq_core::Error::UnsupportedScale(_) => EXIT_SCALE,
                _ => EXIT_VERIFY,
            };
        }
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return e.code();
        }
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Solve(a) => commands::solve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => commands::bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
