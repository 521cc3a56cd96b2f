//! Dense density-matrix quantum mechanics: states, unitary and measurement
//! gates, partial trace, tensor products, von Neumann and relative entropy.

mod density;
mod entropy;
mod gate;
pub mod linalg;
pub mod random;

pub use density::{CMatrix, DensityMatrix, C64, DEFAULT_QUBIT_CAP, STATE_TOL};
pub use entropy::{
    cross_entropy_with_reduction, matrix_log2, quantum_information, relative_entropy, spectrum,
    von_neumann_entropy,
};
pub use gate::{
    apply_measurement, apply_unitary, outcome_distribution, MeasurementGate, Outcome, QuantumGate,
    UnitaryGate,
};
pub use random::random_density_matrix;

pub(crate) use density::check_qubit_cap;
