use serde::{Deserialize, Serialize};

use super::density::{CMatrix, DensityMatrix, C64};
use super::linalg::{apply_left, conjugate, hermitian_eigen, is_hermitian, is_unitary};
use crate::circuit::ReversibleGate;
use crate::{Error, Result};

/// Tolerance on `U†U = I` and `O = O†`.
pub const GATE_TOL: f64 = 1e-10;
/// Observable eigenvalues closer than this are one outcome.
pub const EIGENVALUE_GROUPING_TOL: f64 = 1e-8;

fn check_targets(targets: &[usize], dim: usize) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::invalid("gate needs at least one target"));
    }
    if dim != 1 << targets.len() {
        return Err(Error::invalid(format!(
            "{dim}×{dim} matrix does not act on {} qubits",
            targets.len()
        )));
    }
    for (i, t) in targets.iter().enumerate() {
        if targets[..i].contains(t) {
            return Err(Error::invalid(format!("target {t} repeated")));
        }
    }
    Ok(())
}

fn check_range(targets: &[usize], n: usize) -> Result<()> {
    match targets.iter().find(|&&t| t >= n) {
        Some(t) => Err(Error::invalid(format!("target {t} out of range for {n} qubits"))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: CMatrix,
    targets: Vec<usize>,
}

impl UnitaryGate {
    pub fn new(matrix: CMatrix, targets: Vec<usize>) -> Result<Self> {
        check_targets(&targets, matrix.nrows())?;
        if !is_unitary(&matrix, GATE_TOL) {
            return Err(Error::invalid("matrix is not unitary"));
        }
        Ok(UnitaryGate { matrix, targets })
    }

    /// The permutation matrix of a classical reversible gate: `|x⟩ ↦ |g(x)⟩`.
    pub fn from_reversible(gate: &ReversibleGate, targets: Vec<usize>) -> Result<Self> {
        if !gate.is_bijective() {
            return Err(Error::invalid("gate table is not a permutation"));
        }
        let dim = gate.table().len();
        let matrix = CMatrix::from_fn(dim, dim, |r, c| {
            C64::new(if gate.image(c) == r { 1.0 } else { 0.0 }, 0.0)
        });
        Self::new(matrix, targets)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }
}

/// One measurement outcome: an eigenvalue of the observable and the
/// projector onto its eigenspace.
#[derive(Clone, Debug, PartialEq)]
struct EigenBlock {
    eigenvalue: f64,
    projector: CMatrix,
}

/// An unconditioned measurement of a Hermitian observable.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementGate {
    observable: CMatrix,
    targets: Vec<usize>,
    blocks: Vec<EigenBlock>,
}

impl MeasurementGate {
    pub fn new(observable: CMatrix, targets: Vec<usize>) -> Result<Self> {
        check_targets(&targets, observable.nrows())?;
        if !is_hermitian(&observable, GATE_TOL) {
            return Err(Error::invalid("observable is not Hermitian"));
        }
        let (vals, vecs) = hermitian_eigen(&observable);
        let mut blocks: Vec<EigenBlock> = Vec::new();
        let mut start = 0;
        while start < vals.len() {
            let mut end = start + 1;
            while end < vals.len() && vals[end] - vals[start] <= EIGENVALUE_GROUPING_TOL {
                end += 1;
            }
            let v = vecs.columns(start, end - start);
            blocks.push(EigenBlock {
                eigenvalue: vals[start..end].iter().sum::<f64>() / (end - start) as f64,
                projector: v * v.adjoint(),
            });
            start = end;
        }
        Ok(MeasurementGate {
            observable,
            targets,
            blocks,
        })
    }

    /// Measurement in the computational basis of `targets`, with outcome
    /// `i` for basis string `|i⟩`.
    pub fn computational(targets: Vec<usize>) -> Result<Self> {
        let dim = 1usize << targets.len();
        let obs = CMatrix::from_fn(dim, dim, |r, c| C64::new(if r == c { r as f64 } else { 0.0 }, 0.0));
        Self::new(obs, targets)
    }

    pub fn observable(&self) -> &CMatrix {
        &self.observable
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Number of distinct outcomes.
    pub fn outcomes(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumGate {
    Unitary(UnitaryGate),
    Measurement(MeasurementGate),
}

impl QuantumGate {
    pub fn targets(&self) -> &[usize] {
        match self {
            QuantumGate::Unitary(g) => g.targets(),
            QuantumGate::Measurement(g) => g.targets(),
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            QuantumGate::Unitary(g) => apply_unitary(rho, g),
            QuantumGate::Measurement(g) => apply_measurement(rho, g),
        }
    }
}

impl From<UnitaryGate> for QuantumGate {
    fn from(g: UnitaryGate) -> Self {
        QuantumGate::Unitary(g)
    }
}

impl From<MeasurementGate> for QuantumGate {
    fn from(g: MeasurementGate) -> Self {
        QuantumGate::Measurement(g)
    }
}

/// `Ũ ρ Ũ†` with `Ũ = U ⊗ I`.
pub fn apply_unitary(rho: &DensityMatrix, gate: &UnitaryGate) -> Result<DensityMatrix> {
    check_range(gate.targets(), rho.qubits())?;
    let m = conjugate(rho.qubits(), gate.matrix(), gate.targets(), rho.matrix());
    Ok(DensityMatrix::from_parts(rho.qubits(), m))
}

/// `O ∘ ρ = Σ_λ P̃_λ ρ P̃_λ`: entries linking different eigenvalues of the
/// observable are zeroed (in its eigenbasis).
pub fn apply_measurement(rho: &DensityMatrix, gate: &MeasurementGate) -> Result<DensityMatrix> {
    check_range(gate.targets(), rho.qubits())?;
    let n = rho.qubits();
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for b in &gate.blocks {
        out += conjugate(n, &b.projector, gate.targets(), rho.matrix());
    }
    Ok(DensityMatrix::from_parts(n, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub probability: f64,
}

/// Probability of each eigenvalue: `tr(P̃_λ ρ)`.
pub fn outcome_distribution(rho: &DensityMatrix, gate: &MeasurementGate) -> Result<Vec<Outcome>> {
    check_range(gate.targets(), rho.qubits())?;
    Ok(gate
        .blocks
        .iter()
        .map(|b| Outcome {
            eigenvalue: b.eigenvalue,
            probability: apply_left(rho.qubits(), &b.projector, gate.targets(), rho.matrix())
                .trace()
                .re,
        })
        .collect())
}
