//! Equilibrium computation and verification for anonymous games through
//! black-box payoff queries.
//!
//! Games are stored as payoff tables ([`AnonymousGame`]) but algorithms only see
//! them through a [`PayoffOracle`], which counts every query in a [`QueryLedger`].

pub mod algorithms;
pub mod bruteforce;
pub mod distributions;
pub mod equilibrium;
pub mod error;
pub mod experiment;
pub mod game;
pub mod generators;
pub mod oracle;
pub mod partition;
pub mod smoothing;

pub use algorithms::{
    ap_probe, derive_params, lipschitz_pure_ne, profile_from_count, profile_scan, smoothed_approx_ne,
    smoothed_approx_ne_with, symmetric_pne, uniform_mix, uniform_mix_k, LipschitzOutcome, SmoothedOutcome,
    SmoothedParams,
};
pub use bruteforce::{enumerate_pure_ne, grid_search_min_regret};
pub use distributions::{
    binomial_mode_bound, binomial_pmf, pbd_pmf, pmd_pmf, tv_distance, two_block_pmf, PartitionPmf, Pmf,
};
pub use equilibrium::{
    evaluate_profile, evaluate_profile_k, uniform_mix_regret_k, EquilibriumReport, DEFAULT_SUPPORT_THRESHOLD,
};
pub use error::{Error, Result};
pub use experiment::{Algorithm, BenchRecord, Family};
pub use game::{
    classify, expected_payoff, step_lipschitz_constant, AnonymousGame, GameClassFlags, MixedProfile, Strategy,
};
pub use generators::{
    gen_hidden_minority, gen_irrational3, gen_lcp_game, gen_majority_minority, gen_random, gen_random_selfanon_k,
    lcp_equilibrium, self_anonymize, LcpGameSpec, RandomFamily,
};
pub use oracle::{
    all_players_via_profiles, exact_smoothed_oracle, profile_via_all_players, sampled_smoothed_all_players,
    table_oracle, AccurateQueryConfig, AllPlayersSource, NoisyAllPlayers, PayoffOracle, QueryLedger,
    SampledSmoothedAllPlayers, TableOracle,
};
pub use smoothing::{smoothed_game_exact, SmoothingKernel};
