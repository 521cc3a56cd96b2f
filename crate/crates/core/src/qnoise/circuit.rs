use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::{apply_replacement_noise, ReplacementChannelParams};
use crate::quantum::random::random_unitary;
use crate::quantum::{check_qubit_cap, DensityMatrix, QuantumGate, UnitaryGate, DEFAULT_QUBIT_CAP};
use crate::{Error, Result};

/// Where the noise step falls within each time step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseOrder {
    /// Noise, then the gate layer.
    #[default]
    NoiseFirst,
    /// The gate layer, then noise.
    GatesFirst,
}

/// `n` qubits, layers of gates on disjoint targets, and a result qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCircuit {
    n: usize,
    layers: Vec<Vec<QuantumGate>>,
    result_qubit: usize,
}

impl QuantumCircuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a quantum circuit needs at least one qubit"));
        }
        Ok(QuantumCircuit {
            n,
            layers: Vec::new(),
            result_qubit: 0,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn layers(&self) -> &[Vec<QuantumGate>] {
        &self.layers
    }

    pub fn result_qubit(&self) -> usize {
        self.result_qubit
    }

    pub fn set_result_qubit(&mut self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::invalid(format!("result qubit {q} out of range for {} qubits", self.n)));
        }
        self.result_qubit = q;
        Ok(())
    }

    /// Appends a layer after checking that targets are in range and disjoint.
    pub fn push_layer(&mut self, layer: Vec<QuantumGate>) -> Result<()> {
        let mut used = vec![false; self.n];
        for (g, gate) in layer.iter().enumerate() {
            for &t in gate.targets() {
                if t >= self.n {
                    return Err(Error::invalid(format!(
                        "layer {}: gate {g} targets qubit {t} of {}",
                        self.layers.len(),
                        self.n
                    )));
                }
                if used[t] {
                    return Err(Error::invalid(format!(
                        "layer {}: qubit {t} is targeted twice",
                        self.layers.len()
                    )));
                }
                used[t] = true;
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Applies every layer without noise.
    pub fn apply_noiseless(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut state = rho.clone();
        for layer in &self.layers {
            state = apply_layer(layer, &state)?;
        }
        Ok(state)
    }
}

/// `depth` layers, each a Haar-random unitary on the whole register.
pub fn random_unitary_circuit(n: usize, depth: usize, seed: u64) -> Result<QuantumCircuit> {
    check_qubit_cap(n, DEFAULT_QUBIT_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = QuantumCircuit::new(n)?;
    for _ in 0..depth {
        let u = UnitaryGate::new(random_unitary(1 << n, &mut rng), (0..n).collect())?;
        c.push_layer(vec![u.into()])?;
    }
    Ok(c)
}

pub(crate) fn apply_layer(layer: &[QuantumGate], rho: &DensityMatrix) -> Result<DensityMatrix> {
    let mut state = rho.clone();
    for gate in layer {
        state = gate.apply(&state)?;
    }
    Ok(state)
}

/// Runs `circuit` from `initial`, with one noise step per layer.
pub fn simulate_noisy_quantum(
    circuit: &QuantumCircuit,
    params: &ReplacementChannelParams,
    order: NoiseOrder,
    initial: &DensityMatrix,
) -> Result<DensityMatrix> {
    simulate_noisy_quantum_with(circuit, params, order, initial, circuit.depth(), DEFAULT_QUBIT_CAP, |_, _| {})
}

/// Runs `steps` time steps (layers past the circuit's depth are empty),
/// calling `observe(t, state)` after each step; `t` starts at 1.
pub fn simulate_noisy_quantum_with(
    circuit: &QuantumCircuit,
    params: &ReplacementChannelParams,
    order: NoiseOrder,
    initial: &DensityMatrix,
    steps: usize,
    cap: usize,
    mut observe: impl FnMut(usize, &DensityMatrix),
) -> Result<DensityMatrix> {
    check_qubit_cap(circuit.qubits(), cap)?;
    if initial.qubits() != circuit.qubits() {
        return Err(Error::invalid(format!(
            "initial state has {} qubits but the circuit has {}",
            initial.qubits(),
            circuit.qubits()
        )));
    }
    let mut state = initial.clone();
    for t in 1..=steps {
        let layer = circuit.layers.get(t - 1).map(Vec::as_slice).unwrap_or(&[]);
        state = match order {
            NoiseOrder::NoiseFirst => apply_layer(layer, &apply_replacement_noise(&state, params))?,
            NoiseOrder::GatesFirst => apply_replacement_noise(&apply_layer(layer, &state)?, params),
        };
        observe(t, &state);
    }
    Ok(state)
}
