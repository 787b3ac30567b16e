//! Equilibrium-finding algorithms.

pub mod lipschitz;
pub mod reference;
pub mod smoothed;
pub mod symmetric;
pub mod uniform;

pub use lipschitz::{lipschitz_pure_ne, lipschitz_query_budget, BisectionStep, Construction, LipschitzOutcome};
pub use reference::{ap_probe, profile_scan};
pub use smoothed::{
    derive_params, epsilon_for, failure_budget, lift_profile, smoothed_approx_ne, smoothed_approx_ne_with,
    smoothed_query_budget, SmoothedOutcome, SmoothedParams,
};
pub use symmetric::{profile_from_count, symmetric_pne, symmetric_query_budget};
pub use uniform::{uniform_mix, uniform_mix_k};
