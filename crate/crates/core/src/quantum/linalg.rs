use nalgebra::SymmetricEigen;

use super::density::{CMatrix, C64};

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).camax() <= tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m.adjoint() * m - CMatrix::identity(m.nrows(), m.ncols())).camax() <= tol
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns. The input is symmetrised first.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// `V f(Λ) V†` for a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let mut scaled = vecs.clone();
    for (c, v) in vals.iter().enumerate() {
        let fv = C64::new(f(*v), 0.0);
        for r in 0..scaled.nrows() {
            scaled[(r, c)] *= fv;
        }
    }
    scaled * vecs.adjoint()
}

/// Basis-index offsets of the `2^k` local states of `targets` in an
/// `n`-qubit register, plus the mask of all target bits.
fn target_offsets(n: usize, targets: &[usize]) -> (Vec<usize>, usize) {
    let k = targets.len();
    let bits: Vec<usize> = targets.iter().map(|&t| 1usize << (n - 1 - t)).collect();
    let offs = (0..1usize << k)
        .map(|l| {
            (0..k)
                .filter(|j| (l >> (k - 1 - j)) & 1 == 1)
                .map(|j| bits[j])
                .sum()
        })
        .collect();
    (offs, bits.iter().sum())
}

/// `(op ⊗ I) · m` with `op` acting on `targets` (first target most
/// significant), without forming the full operator.
pub fn apply_left(n: usize, op: &CMatrix, targets: &[usize], m: &CMatrix) -> CMatrix {
    let dim = 1usize << n;
    let (offs, mask) = target_offsets(n, targets);
    let kd = offs.len();
    let mut out = CMatrix::zeros(dim, m.ncols());
    let mut v = vec![C64::new(0.0, 0.0); kd];
    for c in 0..m.ncols() {
        for base in (0..dim).filter(|b| b & mask == 0) {
            for (l, slot) in v.iter_mut().enumerate() {
                *slot = m[(base | offs[l], c)];
            }
            for r in 0..kd {
                let mut s = C64::new(0.0, 0.0);
                for (l, x) in v.iter().enumerate() {
                    s += op[(r, l)] * x;
                }
                out[(base | offs[r], c)] = s;
            }
        }
    }
    out
}

/// `Õ m Õ†` where `Õ` is `op` extended by the identity.
pub fn conjugate(n: usize, op: &CMatrix, targets: &[usize], m: &CMatrix) -> CMatrix {
    let left = apply_left(n, op, targets, m);
    apply_left(n, op, targets, &left.adjoint()).adjoint()
}

/// Embeds a `targets`-local operator into the full `n`-qubit space.
pub fn embed(n: usize, op: &CMatrix, targets: &[usize]) -> CMatrix {
    let dim = 1usize << n;
    apply_left(n, op, targets, &CMatrix::identity(dim, dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_of_pauli_y() {
        let y = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&y);
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        let recon = &vecs * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(2, vals.iter().map(|&v| c(v, 0.0)))) * vecs.adjoint();
        assert!((recon - y).camax() < 1e-12);
    }

    #[test]
    fn embedding_matches_kronecker() {
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let i2 = CMatrix::identity(2, 2);
        // X on qubit 0 of 2 is X ⊗ I; on qubit 1 it is I ⊗ X.
        assert_eq!(embed(2, &x, &[0]), x.kronecker(&i2));
        assert_eq!(embed(2, &x, &[1]), i2.kronecker(&x));
        // A two-qubit operator on reversed targets.
        let cnot = CMatrix::from_fn(4, 4, |r, col| {
            let img = [0, 1, 3, 2][col];
            c(if r == img { 1.0 } else { 0.0 }, 0.0)
        });
        let swapped = embed(2, &cnot, &[1, 0]);
        // Control on qubit 1: |01⟩ ↦ |11⟩.
        assert_eq!(swapped[(3, 1)], c(1.0, 0.0));
    }
}
