//! Noisy quantum circuits under the qubit replacement channel, the
//! majority-tree initialization gadget, and verifiers for the quantum
//! information-decay lemmas.

mod channel;
mod circuit;
mod gadget;
mod lemmas;

pub use channel::{apply_replacement_noise, replace_qubit, ReplacementChannelParams};
pub use circuit::{
    random_unitary_circuit, simulate_noisy_quantum, simulate_noisy_quantum_with, NoiseOrder, QuantumCircuit,
};
pub use gadget::{build_a_t, gadget_threshold_bound, verify_gadget, GadgetReport};
pub use lemmas::{
    quantum_decay_curve, result_outcome_information, verify_average_lemma, verify_qdec,
    verify_qgate_monotonicity, AverageCheck, QdecCheck, QgateCheck,
};
