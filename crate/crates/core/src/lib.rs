//! Noisy reversible and noisy quantum circuits.
//!
//! The crate is organised bottom-up:
//!
//! * [`circuit`]: reversible gate library, layered circuit IR, boolean source
//!   circuits and their text formats.
//! * [`compile`]: forward Bennett-style compilation of boolean circuits and the
//!   `3^d` majority-replication fault-tolerant encoding.
//! * [`classical`]: per-wire bit-flip noise, exact distribution propagation and
//!   seeded Monte Carlo simulation, worthlessness testing.
//! * [`info`]: Shannon entropy and information, the binary symmetric channel,
//!   the `K(δ)` function and information-decay curves.
//! * [`quantum`]: dense density matrices, unitary and measurement gates,
//!   partial trace and von Neumann / relative entropy.
//! * [`qnoise`]: the qubit replacement channel, noisy quantum circuit
//!   simulation, the majority-tree initialization gadget and lemma verifiers.
//! * [`suite`]: batch verification of every entropy inequality with a JSON
//!   report, used by the CLI and the acceptance tests.

pub mod circuit;
pub mod classical;
pub mod compile;
mod error;
pub mod info;
pub mod qnoise;
pub mod quantum;
pub mod suite;

pub use error::{Error, Result};

/// Tolerance for inequality checks on classical information quantities.
pub const CLASSICAL_TOL: f64 = 1e-9;
/// Tolerance for inequality checks on quantum information quantities.
pub const QUANTUM_TOL: f64 = 1e-8;
/// Normalization tolerance for probability vectors.
pub const NORMALIZATION_TOL: f64 = 1e-12;
