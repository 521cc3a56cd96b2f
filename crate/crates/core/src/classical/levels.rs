use serde::{Deserialize, Serialize};

use super::mc::{binomial_sigma, flip_distribution, par_trials, run_trial};
use super::NoiseModel;
use crate::circuit::BitString;
use crate::compile::EncodedCircuit;
use crate::Result;

/// Empirical error rate of the good bits produced by one majority layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelErrorRate {
    /// `1..=d`: the good bits after simulated step `level - 1`.
    pub level: usize,
    /// Good bits per trial at this level, over all logical wires.
    pub good_bits: usize,
    /// `trials × good_bits` bit observations.
    pub samples: u64,
    pub flips: u64,
    pub rate: f64,
}

impl LevelErrorRate {
    /// Binomial standard error of the rate if the true rate were `q`.
    pub fn sigma_at(&self, q: f64) -> f64 {
        binomial_sigma(q, self.samples)
    }
}

/// Monte Carlo error rate of every level's good bits against the noiseless
/// run of the same encoded circuit on the replicated `logical_input`.
pub fn good_bit_error_rates(
    enc: &EncodedCircuit,
    noise: &NoiseModel,
    logical_input: &BitString,
    trials: u64,
    seed: u64,
) -> Result<Vec<LevelErrorRate>> {
    let circuit = &enc.circuit;
    circuit.ensure_valid()?;
    let input = enc.encode_input(logical_input)?;
    let d = enc.d;

    // For each level: the watched wires and their noiseless values.
    let mut watched: Vec<Vec<usize>> = Vec::with_capacity(d);
    let mut reference: Vec<Vec<bool>> = Vec::with_capacity(d);
    let mut bits = input.bits().to_vec();
    for (l, layer) in circuit.layers().iter().enumerate() {
        layer.apply_bits(&mut bits);
        if l % 2 == 1 {
            let level = l / 2 + 1;
            let wires: Vec<usize> = (0..enc.source_width)
                .flat_map(|w| enc.good_bits(level, w))
                .collect();
            reference.push(wires.iter().map(|&w| bits[w]).collect());
            watched.push(wires);
        }
    }

    let flip = flip_distribution(noise);
    let flips = par_trials(
        trials,
        seed,
        || vec![0u64; d],
        |acc, rng| {
            let mut bits = input.bits().to_vec();
            run_trial(circuit, flip.as_ref(), noise.final_noise(), rng, &mut bits, |l, state| {
                if l % 2 == 1 {
                    let i = l / 2;
                    acc[i] += watched[i]
                        .iter()
                        .zip(&reference[i])
                        .filter(|(&w, &want)| state[w] != want)
                        .count() as u64;
                }
            });
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );

    Ok(watched
        .iter()
        .zip(flips)
        .enumerate()
        .map(|(i, (wires, f))| {
            let samples = trials * wires.len() as u64;
            LevelErrorRate {
                level: i + 1,
                good_bits: wires.len(),
                samples,
                flips: f,
                rate: f as f64 / samples as f64,
            }
        })
        .collect())
}
