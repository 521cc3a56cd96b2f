use serde::{Deserialize, Serialize};

use super::mc::{binomial_sigma, z_score, DEFAULT_CONFIDENCE};
use super::seed::derive_seed;
use super::{propagate_exact, simulate_monte_carlo, NoiseModel};
use crate::circuit::{BitString, ReversibleCircuit};
use crate::{Error, Result};

/// A circuit is worthless if on every input its result bit takes each value
/// with probability at least this much.
pub const WORTHLESS_LEVEL: f64 = 0.49;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputVerdict {
    pub input: BitString,
    pub prob_zero: f64,
    pub prob_one: f64,
    /// Confidence half-width of the estimates; zero when computed exactly.
    pub half_width: f64,
    pub worthless_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorthlessVerdict {
    pub inputs: Vec<InputVerdict>,
    /// Worthless-consistent on every tested input.
    pub worthless: bool,
}

fn verdict(input: BitString, prob_one: f64, half_width: f64) -> InputVerdict {
    let prob_zero = 1.0 - prob_one;
    let floor = WORTHLESS_LEVEL - half_width;
    InputVerdict {
        input,
        prob_zero,
        prob_one,
        half_width,
        worthless_consistent: prob_zero >= floor && prob_one >= floor,
    }
}

fn collect(inputs: Vec<InputVerdict>) -> WorthlessVerdict {
    let worthless = inputs.iter().all(|v| v.worthless_consistent);
    WorthlessVerdict { inputs, worthless }
}

/// Monte Carlo worthlessness test. Input `i` is sampled with the seed
/// `derive_seed(seed, i)`.
pub fn worthless_test(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    inputs: &[BitString],
    trials: u64,
    seed: u64,
) -> Result<WorthlessVerdict> {
    if inputs.is_empty() {
        return Err(Error::invalid("worthlessness needs at least one input"));
    }
    let z = z_score(DEFAULT_CONFIDENCE);
    let verdicts = inputs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let r = simulate_monte_carlo(circuit, noise, x, trials, derive_seed(seed, i as u64))?;
            let q = r.result_distribution[1];
            Ok(verdict(x.clone(), q, z * binomial_sigma(q, trials)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(verdicts))
}

/// Worthlessness from the exact result-bit marginals.
pub fn worthless_exact(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    inputs: &[BitString],
) -> Result<WorthlessVerdict> {
    if inputs.is_empty() {
        return Err(Error::invalid("worthlessness needs at least one input"));
    }
    let verdicts = inputs
        .iter()
        .map(|x| {
            let d = propagate_exact(circuit, noise, x)?;
            Ok(verdict(x.clone(), d.marginal(circuit.result_wire()), 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(verdicts))
}
