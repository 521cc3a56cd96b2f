use super::density::{CMatrix, DensityMatrix, C64, STATE_TOL};
use super::linalg::{hermitian_eigen, hermitian_function};
use crate::{Error, Result};

/// Eigenvalues at or below this count as zero in entropy sums and in support
/// checks.
pub const ZERO_EIGENVALUE: f64 = 1e-15;
/// Eigenvalues below this are treated as outside the support when deciding
/// whether a relative entropy is finite.
pub const SUPPORT_TOL: f64 = 1e-12;

/// The spectrum with tiny negative eigenvalues clamped to zero. Eigenvalues
/// below `-1e-10` are an error.
pub fn spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let (vals, _) = hermitian_eigen(rho.matrix());
    clamp(vals)
}

fn clamp(vals: Vec<f64>) -> Result<Vec<f64>> {
    vals.into_iter()
        .map(|v| {
            if v < -STATE_TOL {
                Err(Error::InvalidState(format!("negative eigenvalue {v}")))
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

fn entropy_of_spectrum(vals: &[f64]) -> f64 {
    -vals
        .iter()
        .filter(|&&v| v > ZERO_EIGENVALUE)
        .map(|&v| v * v.log2())
        .sum::<f64>()
}

/// `S(ρ) = -tr(ρ log₂ ρ)`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&spectrum(rho)?))
}

/// `I(ρ) = n - S(ρ)`.
pub fn quantum_information(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.qubits() as f64 - von_neumann_entropy(rho)?)
}

/// `tr[ρ₂ (log₂ ρ₂ - log₂ ρ₁)]`, called the relative entropy of `ρ₁` with
/// respect to `ρ₂`. Note the argument order: this is `D(ρ₂ ‖ ρ₁)` in the
/// usual modern notation. Returns `f64::INFINITY` when the support of `ρ₂`
/// is not contained in the support of `ρ₁`.
pub fn relative_entropy(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.qubits() != rho2.qubits() {
        return Err(Error::invalid(format!(
            "relative entropy of {} and {} qubit states",
            rho1.qubits(),
            rho2.qubits()
        )));
    }
    let (v1, u1) = hermitian_eigen(rho1.matrix());
    let (v2, u2) = hermitian_eigen(rho2.matrix());
    let v1 = clamp(v1)?;
    let v2 = clamp(v2)?;
    // overlap[(m, n)] = |⟨v1_m|v2_n⟩|²
    let inner = u1.adjoint() * &u2;
    let mut cross = 0.0;
    for (m, &l1) in v1.iter().enumerate() {
        let weight: f64 = v2
            .iter()
            .enumerate()
            .map(|(n, &l2)| l2 * inner[(m, n)].norm_sqr())
            .sum();
        if l1 <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * l1.log2();
    }
    Ok(-entropy_of_spectrum(&v2) - cross)
}

/// `log₂ ρ` for a full-rank state.
pub fn matrix_log2(rho: &DensityMatrix) -> Result<CMatrix> {
    let vals = spectrum(rho)?;
    if vals.iter().any(|&v| v <= ZERO_EIGENVALUE) {
        return Err(Error::InvalidState("logarithm of a singular state".into()));
    }
    Ok(hermitian_function(rho.matrix(), f64::log2))
}

/// `-tr(ρ log₂(ρ_A ⊗ I))` where `ρ_A` is the reduction of `ρ` to its first
/// `keep` qubits. Computed by forming the full operator, independently of the
/// spectrum of `ρ_A`.
pub fn cross_entropy_with_reduction(rho: &DensityMatrix, keep: usize) -> Result<f64> {
    if keep == 0 || keep > rho.qubits() {
        return Err(Error::invalid(format!("cannot keep {keep} of {} qubits", rho.qubits())));
    }
    let reduced = rho.partial_trace(&(0..keep).collect::<Vec<_>>())?;
    let log_a = matrix_log2(&reduced)?;
    let rest = 1usize << (rho.qubits() - keep);
    let full = log_a.kronecker(&CMatrix::identity(rest, rest));
    let tr: C64 = (rho.matrix() * full).trace();
    Ok(-tr.re)
}
