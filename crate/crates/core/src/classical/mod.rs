//! Noisy reversible circuit simulation: exact distribution propagation,
//! seeded Monte Carlo, worthlessness tests and per-level error rates of the
//! fault-tolerant encoding.

mod dist;
mod exact;
mod levels;
mod mc;
mod noise;
pub mod seed;
mod worthless;

pub use dist::BitDistribution;
pub use exact::{propagate_exact, propagate_exact_with, Stage, DEFAULT_EXACT_CAP};
pub use levels::{good_bit_error_rates, LevelErrorRate};
pub use mc::{
    binomial_sigma, exact_report, simulate_monte_carlo, z_score, SimMethod, SimReport,
    DEFAULT_CONFIDENCE,
};
pub use noise::NoiseModel;
pub use worthless::{worthless_exact, worthless_test, InputVerdict, WorthlessVerdict, WORTHLESS_LEVEL};

pub(crate) use exact::check_cap;
