use serde::{Deserialize, Serialize};

use super::channel::ReplacementChannelParams;
use super::circuit::{simulate_noisy_quantum, NoiseOrder, QuantumCircuit};
use crate::circuit::{BitString, ReversibleGate};
use crate::quantum::{check_qubit_cap, DensityMatrix, QuantumGate, UnitaryGate, DEFAULT_QUBIT_CAP};
use crate::Result;

/// The majority tree on `3^t` qubits. Layer `i` (from 1) applies the
/// quantum MAJ3 permutation to triples `(j·3^i, j·3^i + 3^{i-1}, j·3^i + 2·3^{i-1})`;
/// the first qubit of each triple carries on. The result qubit is 0.
pub fn build_a_t(t: usize) -> Result<QuantumCircuit> {
    let n = 3usize.checked_pow(t as u32).unwrap_or(usize::MAX);
    check_qubit_cap(n, DEFAULT_QUBIT_CAP)?;
    let mut circuit = QuantumCircuit::new(n)?;
    let maj = ReversibleGate::maj3();
    for i in 1..=t {
        let stride = 3usize.pow(i as u32 - 1);
        let layer = (0..n / (3 * stride))
            .map(|j| {
                let base = j * 3 * stride;
                UnitaryGate::from_reversible(&maj, vec![base, base + stride, base + 2 * stride]).map(QuantumGate::from)
            })
            .collect::<Result<Vec<_>>>()?;
        circuit.push_layer(layer)?;
    }
    Ok(circuit)
}

/// `3(2p)² + (2p)³`. The gadget is only claimed to work when this is at
/// most `p`.
pub fn gadget_threshold_bound(p: f64) -> f64 {
    let q = 2.0 * p;
    3.0 * q * q + q * q * q
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub t: usize,
    pub p: f64,
    pub qubits: usize,
    /// Probability that measuring the result qubit gives 0.
    pub prob_zero: f64,
    pub threshold_bound: f64,
    pub threshold_holds: bool,
    /// Whether `prob_zero ≥ 1 - p`; only claimed when the threshold holds.
    pub meets_claim: bool,
}

/// Simulates the gadget under replacement noise from `|0…0⟩`.
pub fn verify_gadget(t: usize, p: f64) -> Result<GadgetReport> {
    let params = ReplacementChannelParams::new(p)?;
    let circuit = build_a_t(t)?;
    let n = circuit.qubits();
    let initial = DensityMatrix::from_basis_state(&BitString::zeros(n));
    let out = simulate_noisy_quantum(&circuit, &params, NoiseOrder::NoiseFirst, &initial)?;
    let result = out.partial_trace(&[circuit.result_qubit()])?;
    let prob_zero = result.matrix()[(0, 0)].re;
    let threshold_bound = gadget_threshold_bound(p);
    Ok(GadgetReport {
        t,
        p,
        qubits: n,
        prob_zero,
        threshold_bound,
        threshold_holds: threshold_bound <= p,
        meets_claim: prob_zero >= 1.0 - p - crate::QUANTUM_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn shapes() {
        let a0 = build_a_t(0).unwrap();
        assert_eq!((a0.qubits(), a0.size()), (1, 0));
        let a1 = build_a_t(1).unwrap();
        assert_eq!((a1.qubits(), a1.depth(), a1.size()), (3, 1, 1));
        let a2 = build_a_t(2).unwrap();
        assert_eq!(a2.qubits(), 9);
        assert_eq!(a2.layers().iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 1]);
        assert_eq!(a2.layers()[1][0].targets(), &[0, 3, 6]);
        assert!(matches!(build_a_t(3), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn noiseless_gadget_is_exact() {
        let r = verify_gadget(2, 0.0).unwrap();
        assert!((r.prob_zero - 1.0).abs() < 1e-12 && r.meets_claim);
    }

    #[test]
    fn one_level_gadget() {
        let r = verify_gadget(1, 0.05).unwrap();
        assert!((r.threshold_bound - 0.031).abs() < 1e-12);
        assert!(r.threshold_holds);
        // Each qubit reads 1 with probability p/2 after one noise step; the
        // majority of three is wrong with probability 3q² - 2q³.
        let q = 0.025;
        assert!((r.prob_zero - (1.0 - (3.0 * q * q - 2.0 * q * q * q))).abs() < 1e-12);
        assert!(r.meets_claim);
    }

    #[test]
    fn above_threshold_is_reported() {
        let r = verify_gadget(1, 0.3).unwrap();
        assert!(!r.threshold_holds);
    }
}
