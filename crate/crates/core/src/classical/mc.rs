use std::io::Write;

use rand::distr::{Bernoulli, Distribution};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::seed::trial_rng;
use super::{propagate_exact, NoiseModel};
use crate::circuit::{BitString, ReversibleCircuit};
use crate::{Error, Result};

/// Confidence level of the half-widths in a [`SimReport`].
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

const BATCH: u64 = 2048;

/// Two-sided normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

/// Standard error of a binomial proportion `q` estimated from `n` samples.
pub fn binomial_sigma(q: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (q * (1.0 - q) / n as f64).sqrt()
}

/// Runs one noisy trial in place on `bits`. `after_layer` sees the state after
/// each layer, before the following noise step.
pub(crate) fn run_trial<F: FnMut(usize, &[bool])>(
    circuit: &ReversibleCircuit,
    flip: Option<&Bernoulli>,
    final_noise: bool,
    rng: &mut ChaCha8Rng,
    bits: &mut [bool],
    mut after_layer: F,
) {
    let noise_step = |bits: &mut [bool], rng: &mut ChaCha8Rng| {
        if let Some(flip) = flip {
            for b in bits.iter_mut() {
                if flip.sample(rng) {
                    *b = !*b;
                }
            }
        }
    };
    for (l, layer) in circuit.layers().iter().enumerate() {
        noise_step(bits, rng);
        layer.apply_bits(bits);
        after_layer(l, bits);
    }
    if final_noise {
        noise_step(bits, rng);
    }
}

pub(crate) fn flip_distribution(noise: &NoiseModel) -> Option<Bernoulli> {
    (noise.p() > 0.0).then(|| Bernoulli::new(noise.p()).expect("p in [0, 1/2)"))
}

/// Runs `trials` trials in fixed-size batches and folds the per-batch
/// accumulators in batch order. Each trial gets the stream
/// `trial_rng(seed, trial)`, so the result is independent of thread count.
pub(crate) fn par_trials<T, I, B, R>(trials: u64, seed: u64, init: I, body: B, merge: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    B: Fn(&mut T, &mut ChaCha8Rng) + Sync,
    R: Fn(T, T) -> T,
{
    let batches = trials.div_ceil(BATCH);
    let parts: Vec<T> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for t in b * BATCH..((b + 1) * BATCH).min(trials) {
                let mut rng = trial_rng(seed, t);
                body(&mut acc, &mut rng);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMethod {
    Exact,
    MonteCarlo,
}

/// Outcome of a noisy simulation, exact or sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub method: SimMethod,
    /// Zero for exact reports.
    pub trials: u64,
    pub seed: Option<u64>,
    pub confidence: f64,
    pub p: f64,
    pub final_noise: bool,
    pub input: BitString,
    pub noiseless_output: BitString,
    pub result_wire: usize,
    /// `Pr[bit w = 1]` for every wire.
    pub marginals: Vec<f64>,
    pub marginal_half_widths: Vec<f64>,
    /// `[Pr[result = 0], Pr[result = 1]]`.
    pub result_distribution: [f64; 2],
    pub result_half_width: f64,
    /// Probability that the result bit differs from the noiseless one.
    pub result_error: f64,
    pub result_error_half_width: f64,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per tracked quantity: `quantity,value,half_width`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidState(format!("failed to write CSV: {e}"));
        out.write_record(["quantity", "value", "half_width"]).map_err(io)?;
        for (i, (m, h)) in self.marginals.iter().zip(&self.marginal_half_widths).enumerate() {
            out.write_record([format!("marginal_{i}"), m.to_string(), h.to_string()])
                .map_err(io)?;
        }
        let rows = [
            ("result_p0", self.result_distribution[0], self.result_half_width),
            ("result_p1", self.result_distribution[1], self.result_half_width),
            ("result_error", self.result_error, self.result_error_half_width),
        ];
        for (name, v, h) in rows {
            out.write_record([name.to_string(), v.to_string(), h.to_string()])
                .map_err(io)?;
        }
        out.flush()
            .map_err(|e| Error::InvalidState(format!("failed to write CSV: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

fn check_input(circuit: &ReversibleCircuit, input: &BitString) -> Result<()> {
    if input.width() != circuit.width() {
        return Err(Error::invalid(format!(
            "input has {} bits but the circuit has width {}",
            input.width(),
            circuit.width()
        )));
    }
    Ok(())
}

#[derive(Clone)]
struct Counts {
    ones: Vec<u64>,
    errors: u64,
}

/// Seeded Monte Carlo estimate of the output statistics. Every trial draws an
/// independent flip for each wire in each time unit.
pub fn simulate_monte_carlo(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    input: &BitString,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    circuit.ensure_valid()?;
    check_input(circuit, input)?;
    let reference = circuit.evaluate_noiseless(input)?;
    let r = circuit.result_wire();
    let want = reference.bits()[r];
    let width = circuit.width();
    let flip = flip_distribution(noise);

    let counts = par_trials(
        trials,
        seed,
        || Counts {
            ones: vec![0; width],
            errors: 0,
        },
        |acc, rng| {
            let mut bits = input.bits().to_vec();
            run_trial(circuit, flip.as_ref(), noise.final_noise(), rng, &mut bits, |_, _| {});
            for (c, &b) in acc.ones.iter_mut().zip(&bits) {
                *c += u64::from(b);
            }
            acc.errors += u64::from(bits[r] != want);
        },
        |mut a, b| {
            for (x, y) in a.ones.iter_mut().zip(b.ones) {
                *x += y;
            }
            a.errors += b.errors;
            a
        },
    );

    let z = z_score(DEFAULT_CONFIDENCE);
    let n = trials as f64;
    let marginals: Vec<f64> = counts.ones.iter().map(|&c| c as f64 / n).collect();
    let marginal_half_widths = marginals.iter().map(|&q| z * binomial_sigma(q, trials)).collect();
    let p1 = marginals[r];
    let err = counts.errors as f64 / n;
    Ok(SimReport {
        method: SimMethod::MonteCarlo,
        trials,
        seed: Some(seed),
        confidence: DEFAULT_CONFIDENCE,
        p: noise.p(),
        final_noise: noise.final_noise(),
        input: input.clone(),
        noiseless_output: reference,
        result_wire: r,
        marginals,
        marginal_half_widths,
        result_distribution: [1.0 - p1, p1],
        result_half_width: z * binomial_sigma(p1, trials),
        result_error: err,
        result_error_half_width: z * binomial_sigma(err, trials),
    })
}

/// The same report computed from the exact output distribution.
pub fn exact_report(circuit: &ReversibleCircuit, noise: &NoiseModel, input: &BitString) -> Result<SimReport> {
    let dist = propagate_exact(circuit, noise, input)?;
    let reference = circuit.evaluate_noiseless(input)?;
    let r = circuit.result_wire();
    let marginals = dist.marginals();
    let p1 = marginals[r];
    let err = if reference.bits()[r] { 1.0 - p1 } else { p1 };
    Ok(SimReport {
        method: SimMethod::Exact,
        trials: 0,
        seed: None,
        confidence: 1.0,
        p: noise.p(),
        final_noise: noise.final_noise(),
        input: input.clone(),
        noiseless_output: reference,
        result_wire: r,
        marginal_half_widths: vec![0.0; marginals.len()],
        marginals,
        result_distribution: [1.0 - p1, p1],
        result_half_width: 0.0,
        result_error: err,
        result_error_half_width: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateOp, Layer, ReversibleGate};

    fn small_circuit() -> ReversibleCircuit {
        ReversibleCircuit::from_layers(
            4,
            vec![
                Layer::new(vec![
                    GateOp::new(ReversibleGate::toffoli(), vec![0, 1, 2]),
                    GateOp::new(ReversibleGate::not(), vec![3]),
                ]),
                Layer::new(vec![GateOp::new(ReversibleGate::maj3(), vec![3, 2, 0])]),
                Layer::new(vec![GateOp::new(ReversibleGate::cnot(), vec![0, 1])]),
            ],
            1,
        )
    }

    #[test]
    fn noiseless_trials_match_reference() {
        let c = small_circuit();
        let x: BitString = "1100".parse().unwrap();
        let r = simulate_monte_carlo(&c, &NoiseModel::noiseless(), &x, 500, 3).unwrap();
        assert_eq!(r.result_error, 0.0);
        let want = c.evaluate_noiseless(&x).unwrap();
        for (m, b) in r.marginals.iter().zip(want.bits()) {
            assert_eq!(*m, if *b { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let c = small_circuit();
        let noise = NoiseModel::new(0.2).unwrap();
        let x: BitString = "1010".parse().unwrap();
        let a = simulate_monte_carlo(&c, &noise, &x, 5000, 11).unwrap();
        let b = simulate_monte_carlo(&c, &noise, &x, 5000, 11).unwrap();
        assert_eq!(a, b);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate_monte_carlo(&c, &noise, &x, 5000, 11).unwrap());
        assert_eq!(a, serial);
        let other = simulate_monte_carlo(&c, &noise, &x, 5000, 12).unwrap();
        assert_ne!(a.marginals, other.marginals);
    }

    #[test]
    fn agrees_with_exact_within_four_sigma() {
        let c = small_circuit();
        let noise = NoiseModel::new(0.1).unwrap();
        let x: BitString = "0110".parse().unwrap();
        let trials = 100_000;
        let mc = simulate_monte_carlo(&c, &noise, &x, trials, 5).unwrap();
        let ex = exact_report(&c, &noise, &x).unwrap();
        for (a, b) in mc.marginals.iter().zip(&ex.marginals) {
            assert!((a - b).abs() <= 4.0 * binomial_sigma(*b, trials));
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let c = small_circuit();
        assert!(simulate_monte_carlo(&c, &NoiseModel::noiseless(), &BitString::zeros(4), 0, 1).is_err());
    }

    #[test]
    fn csv_has_one_row_per_quantity() {
        let c = small_circuit();
        let r = exact_report(&c, &NoiseModel::new(0.1).unwrap(), &BitString::zeros(4)).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 1 + 4 + 3);
        assert!(csv.starts_with("quantity,value,half_width\n"));
    }

    #[test]
    fn z_scores() {
        assert!((z_score(0.95) - 1.959964).abs() < 1e-5);
        assert!((z_score(0.99) - 2.575829).abs() < 1e-5);
    }
}
