//! Instance generators.

pub mod lcp;
pub mod named;
pub mod random;
pub mod reduction;

pub use lcp::{gen_lcp_game, lcp_equilibrium, lcp_game_from_spec, lcp_hidden_string, LcpGameSpec};
pub use named::{gen_hidden_minority, gen_irrational3, gen_majority_minority, irrational3_equilibrium};
pub use random::{gen_random, gen_random_selfanon_k, RandomFamily};
pub use reduction::self_anonymize;
