//! Shannon entropy and information of bit distributions, the binary symmetric
//! channel, the single-bit information function `K(δ)` and decay curves.
//!
//! All quantities are in bits. The information of an `N`-bit distribution is
//! `N - H`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::{BitString, ReversibleCircuit};
use crate::classical::{check_cap, BitDistribution, NoiseModel};
use crate::{Error, Result, CLASSICAL_TOL};

/// Probabilities at or below this are dropped from entropy sums.
pub const ZERO_PROB: f64 = 1e-15;

pub fn entropy_of(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&q| q > ZERO_PROB)
        .map(|&q| q * q.log2())
        .sum::<f64>()
}

pub fn shannon_entropy(dist: &BitDistribution) -> f64 {
    entropy_of(dist.probs())
}

pub fn information(dist: &BitDistribution) -> f64 {
    dist.width() as f64 - shannon_entropy(dist)
}

/// Binary entropy `H(q)` of a single bit.
pub fn binary_entropy(q: f64) -> f64 {
    entropy_of(&[q, 1.0 - q])
}

/// Pushes `dist` through independent flips with probability `p ∈ [0, 1/2]` on
/// every bit.
pub fn apply_bsc(dist: &BitDistribution, p: f64) -> Result<BitDistribution> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::invalid(format!("flip probability {p} is outside [0, 1/2]")));
    }
    let mut out = dist.clone();
    out.flip_all(p);
    Ok(out)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("δ = {delta} is outside [0, 1]")));
    }
    Ok(())
}

/// Information of a bit with `Pr[1] = (1 + δ)/2`:
/// `((1+δ)log(1+δ) + (1-δ)log(1-δ)) / 2`.
pub fn binary_information_k(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let term = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    Ok((term(1.0 + delta) + term(1.0 - delta)) / 2.0)
}

/// The power series `(1/ln 2) Σ_{k=1}^{terms} δ^{2k} / (2k(2k-1))`.
pub fn k_series(delta: f64, terms: usize) -> Result<f64> {
    check_delta(delta)?;
    let d2 = delta * delta;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 1..=terms {
        pow *= d2;
        let kk = 2.0 * k as f64;
        sum += pow / (kk * (kk - 1.0));
    }
    Ok(sum / std::f64::consts::LN_2)
}

/// Number of series terms after which the remaining terms are below
/// `eps` in total, using the geometric tail bound.
pub fn k_series_terms(delta: f64, eps: f64) -> usize {
    let d2 = delta * delta;
    if d2 >= 1.0 {
        return usize::MAX;
    }
    let mut pow = 1.0;
    for k in 1.. {
        pow *= d2;
        let kk = 2.0 * k as f64;
        let tail = pow * d2 / ((kk + 2.0) * (kk + 1.0)) / (1.0 - d2);
        if tail < eps {
            return k;
        }
    }
    unreachable!()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub before: f64,
    pub after: f64,
    /// `(1-2p)^2 · before`.
    pub bound: f64,
    pub holds: bool,
}

/// One application of the product flip channel must shrink information by at
/// least `(1-2p)^2`.
pub fn verify_decay_lemma(dist: &BitDistribution, p: f64) -> Result<DecayCheck> {
    let before = information(dist);
    let after = information(&apply_bsc(dist, p)?);
    let bound = (1.0 - 2.0 * p).powi(2) * before;
    Ok(DecayCheck {
        before,
        after,
        bound,
        holds: after <= bound + CLASSICAL_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRecord {
    pub step: usize,
    pub information: f64,
    pub bound: f64,
}

/// Information after each noise step, with the bound it must stay under.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub records: Vec<DecayRecord>,
    /// Change in information across each gate layer.
    pub gate_deltas: Vec<f64>,
}

impl DecayCurve {
    /// Largest `information - bound` over the records.
    pub fn worst_margin(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.information - r.bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.records.iter().all(|r| r.information <= r.bound + tol)
    }

    pub fn max_gate_delta(&self) -> f64 {
        self.gate_deltas.iter().map(|d| d.abs()).fold(0.0, f64::max)
    }

    /// Columns `m,I_m,bound_m`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidState(format!("failed to write CSV: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["m", "I_m", "bound_m"]).map_err(io)?;
        for r in &self.records {
            out.write_record([r.step.to_string(), r.information.to_string(), r.bound.to_string()])
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

/// Exact information after each of `steps` noise steps, starting from the
/// point mass on `input`. Layer `m` of the circuit follows noise step `m`;
/// past the circuit's depth the wires idle. The bound is `(1-2p)^{2m} · N`.
pub fn decay_curve(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    input: &BitString,
    steps: usize,
) -> Result<DecayCurve> {
    decay_curve_capped(circuit, noise, input, steps, crate::classical::DEFAULT_EXACT_CAP)
}

pub fn decay_curve_capped(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    input: &BitString,
    steps: usize,
    cap: usize,
) -> Result<DecayCurve> {
    check_cap(circuit.width(), cap)?;
    circuit.ensure_valid()?;
    if input.width() != circuit.width() {
        return Err(Error::invalid(format!(
            "input has {} bits but the circuit has width {}",
            input.width(),
            circuit.width()
        )));
    }
    let n = circuit.width() as f64;
    let rate = (1.0 - 2.0 * noise.p()).powi(2);
    let mut dist = BitDistribution::point_mass(input);
    let mut curve = DecayCurve::default();
    curve.records.push(DecayRecord {
        step: 0,
        information: information(&dist),
        bound: n,
    });
    for m in 1..=steps {
        dist.flip_all(noise.p());
        let info = information(&dist);
        curve.records.push(DecayRecord {
            step: m,
            information: info,
            bound: rate.powi(m as i32) * n,
        });
        if let Some(layer) = circuit.layers().get(m - 1) {
            dist.apply_layer(layer);
            curve.gate_deltas.push(information(&dist) - info);
        }
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&BitDistribution::point_mass(&"0110".parse().unwrap())), 0.0);
        assert!((shannon_entropy(&BitDistribution::uniform(5)) - 5.0).abs() < 1e-12);
        let d = BitDistribution::new(1, vec![0.9, 0.1]).unwrap();
        assert!((shannon_entropy(&d) - 0.4689955935892812).abs() < 1e-12);
    }

    #[test]
    fn information_examples() {
        assert!(information(&BitDistribution::uniform(3)).abs() < 1e-12);
        assert_eq!(information(&BitDistribution::point_mass(&"101".parse().unwrap())), 3.0);
        let d = BitDistribution::new(1, vec![0.1, 0.9]).unwrap();
        assert!((information(&d) - 0.5310044064107188).abs() < 1e-12);
    }

    #[test]
    fn bsc_examples() {
        let x = BitDistribution::point_mass(&"1".parse().unwrap());
        assert_eq!(apply_bsc(&x, 0.0).unwrap(), x);
        let y = apply_bsc(&x, 0.1).unwrap();
        assert!((y.probs()[0] - 0.1).abs() < 1e-15 && (y.probs()[1] - 0.9).abs() < 1e-15);
        let z = apply_bsc(&BitDistribution::point_mass(&"0110".parse().unwrap()), 0.5).unwrap();
        for q in z.probs() {
            assert!((q - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!(apply_bsc(&x, 0.6).is_err());
    }

    #[test]
    fn k_examples() {
        assert_eq!(binary_information_k(0.0).unwrap(), 0.0);
        assert!((binary_information_k(1.0).unwrap() - 1.0).abs() < 1e-15);
        let k = binary_information_k(0.8).unwrap();
        assert!((k - (1.0 - binary_entropy(0.9))).abs() < 1e-12);
        assert!((k - 0.5310044064107188).abs() < 1e-12);
        assert!(binary_information_k(1.01).is_err());
        assert!(binary_information_k(-0.1).is_err());
    }

    #[test]
    fn k_series_matches_closed_form() {
        for i in 0..100 {
            let delta = 0.99 * i as f64 / 99.0;
            let terms = k_series_terms(delta, 1e-13);
            let series = k_series(delta, terms).unwrap();
            assert!((series - binary_information_k(delta).unwrap()).abs() < 1e-10, "δ = {delta}");
        }
    }

    #[test]
    fn decay_lemma_examples() {
        let x = BitDistribution::point_mass(&"0".parse().unwrap());
        let c = verify_decay_lemma(&x, 0.1).unwrap();
        assert!((c.after - 0.5310044064107188).abs() < 1e-12);
        assert!((c.bound - 0.64).abs() < 1e-12);
        assert!(c.holds);

        let same = verify_decay_lemma(&x, 0.0).unwrap();
        assert_eq!((same.before, same.after, same.bound), (1.0, 1.0, 1.0));

        let u = verify_decay_lemma(&BitDistribution::uniform(3), 0.2).unwrap();
        assert!(u.holds && u.after.abs() < 1e-12);
    }

    #[test]
    fn identity_decay_curve() {
        let c = ReversibleCircuit::identity(8, 10);
        let curve = decay_curve(&c, &NoiseModel::new(0.1).unwrap(), &BitString::zeros(8), 10).unwrap();
        assert_eq!(curve.records.len(), 11);
        assert!(curve.holds(CLASSICAL_TOL));
        for w in curve.records.windows(2) {
            assert!(w[1].information <= w[0].information);
        }
        assert_eq!(curve.max_gate_delta(), 0.0);
    }

    #[test]
    fn noiseless_curve_is_flat() {
        let c = ReversibleCircuit::identity(3, 4);
        let curve = decay_curve(&c, &NoiseModel::noiseless(), &"010".parse().unwrap(), 6).unwrap();
        assert!(curve.records.iter().all(|r| r.information == 3.0));
    }

    #[test]
    fn curve_csv() {
        let c = ReversibleCircuit::identity(1, 1);
        let curve = decay_curve(&c, &NoiseModel::new(0.1).unwrap(), &"0".parse().unwrap(), 2).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,I_m,bound_m");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,1"));
    }
}
