//! Seeded random states, unitaries and observables for verification runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::density::{check_qubit_cap, CMatrix, DensityMatrix, C64, DEFAULT_QUBIT_CAP};
use crate::{Error, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `G G† / tr(G G†)` for a `2^n × rank` matrix `G` of independent standard
/// complex Gaussians. Deterministic per seed.
pub fn random_density_matrix(n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_matrix_with(n, rank, &mut rng)
}

pub fn random_density_matrix_with<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_qubit_cap(n, DEFAULT_QUBIT_CAP)?;
    let dim = 1usize << n;
    if rank == 0 || rank > dim {
        return Err(Error::invalid(format!("rank {rank} is outside 1..={dim}")));
    }
    let g = gaussian_matrix(dim, rank, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    Ok(DensityMatrix::from_parts(n, gg * C64::new(1.0 / tr, 0.0)))
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// `(G + G†)/2` for a complex Gaussian `G`; almost surely non-degenerate.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// A random product `ρ₁ ⊗ … ⊗ ρ_n` of single-qubit states of random rank.
pub fn random_product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    let mut state = random_density_matrix_with(1, rng.random_range(1..=2), rng)?;
    for _ in 1..n {
        let q = random_density_matrix_with(1, rng.random_range(1..=2), rng)?;
        state = state.tensor(&q);
    }
    Ok(state)
}
