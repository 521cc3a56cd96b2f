use serde::{Deserialize, Serialize};

use super::channel::{apply_replacement_noise, ReplacementChannelParams};
use super::circuit::{simulate_noisy_quantum_with, NoiseOrder, QuantumCircuit};
use crate::info::{binary_entropy, DecayCurve, DecayRecord};
use crate::quantum::{quantum_information, DensityMatrix, QuantumGate, DEFAULT_QUBIT_CAP};
use crate::{Error, Result, QUANTUM_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QdecCheck {
    pub before: f64,
    pub after: f64,
    /// `(1-p) · before`.
    pub bound: f64,
    pub holds: bool,
}

/// One replacement-noise step must shrink information by a factor `1-p`.
pub fn verify_qdec(rho: &DensityMatrix, params: &ReplacementChannelParams) -> Result<QdecCheck> {
    let before = quantum_information(rho)?;
    let after = quantum_information(&apply_replacement_noise(rho, params))?;
    let bound = (1.0 - params.p()) * before;
    Ok(QdecCheck {
        before,
        after,
        bound,
        holds: after <= bound + QUANTUM_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageCheck {
    pub k: usize,
    /// Mean information of the `k`-qubit reductions.
    pub lhs: f64,
    /// `(k/n) · I(ρ)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Averages `I(ρ|_A)` over every `k`-subset `A` of the qubits and compares
/// with `k/n` of the total information.
pub fn verify_average_lemma(rho: &DensityMatrix, k: usize) -> Result<AverageCheck> {
    let n = rho.qubits();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!("k = {k} must satisfy 0 < k < n = {n}")));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|q| mask >> (n - 1 - q) & 1 == 1).collect();
        total += quantum_information(&rho.partial_trace(&subset)?)?;
        count += 1;
    }
    let lhs = total / count as f64;
    let rhs = k as f64 / n as f64 * quantum_information(rho)?;
    Ok(AverageCheck {
        k,
        lhs,
        rhs,
        holds: lhs <= rhs + QUANTUM_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QgateCheck {
    pub before: f64,
    pub after: f64,
    pub unitary: bool,
    pub holds: bool,
}

/// Unitaries preserve information; measurements never increase it.
pub fn verify_qgate_monotonicity(rho: &DensityMatrix, gate: &QuantumGate) -> Result<QgateCheck> {
    let before = quantum_information(rho)?;
    let after = quantum_information(&gate.apply(rho)?)?;
    let unitary = matches!(gate, QuantumGate::Unitary(_));
    let holds = if unitary {
        (after - before).abs() <= QUANTUM_TOL
    } else {
        after <= before + QUANTUM_TOL
    };
    Ok(QgateCheck {
        before,
        after,
        unitary,
        holds,
    })
}

/// Information after each of `steps` noise-plus-layer steps, with bound
/// `(1-p)^t · I_0`. Also returns the final state.
pub fn quantum_decay_curve(
    circuit: &QuantumCircuit,
    params: &ReplacementChannelParams,
    order: NoiseOrder,
    initial: &DensityMatrix,
    steps: usize,
) -> Result<(DecayCurve, DensityMatrix)> {
    let i0 = quantum_information(initial)?;
    let mut curve = DecayCurve::default();
    curve.records.push(DecayRecord {
        step: 0,
        information: i0,
        bound: i0,
    });
    let mut failure = None;
    let rate = 1.0 - params.p();
    let last = simulate_noisy_quantum_with(circuit, params, order, initial, steps, DEFAULT_QUBIT_CAP, |t, state| {
        match quantum_information(state) {
            Ok(info) => curve.records.push(DecayRecord {
                step: t,
                information: info,
                bound: rate.powi(t as i32) * i0,
            }),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok((curve, last)),
    }
}

/// `1 - H(f)` for the computational-basis outcome `f` of `qubit`.
pub fn result_outcome_information(rho: &DensityMatrix, qubit: usize) -> Result<f64> {
    let reduced = rho.partial_trace(&[qubit])?;
    Ok(1.0 - binary_entropy(reduced.matrix()[(0, 0)].re.clamp(0.0, 1.0)))
}
