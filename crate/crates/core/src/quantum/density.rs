use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linalg::{hermitian_eigen, is_hermitian};
use crate::circuit::BitString;
use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance on hermiticity, trace and negative eigenvalues of a state.
pub const STATE_TOL: f64 = 1e-10;

/// Largest qubit count handled by default (a 1024 × 1024 matrix).
pub const DEFAULT_QUBIT_CAP: usize = 10;

pub(crate) fn check_qubit_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "qubit count",
            requested: n,
            cap,
        });
    }
    Ok(())
}

/// A mixed state of `n` qubits: a `2^n × 2^n` Hermitian, positive
/// semidefinite, trace-one matrix. Qubit 0 is the most significant bit of the
/// row/column index, so `|10⟩` is basis index 2.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: CMatrix,
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::invalid(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl DensityMatrix {
    /// Validates and wraps a matrix.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("density matrix must be square"));
        }
        let n = qubits_for_dim(m.nrows())?;
        let rho = DensityMatrix { n, m };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(n: usize, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), 1 << n);
        DensityMatrix { n, m }
    }

    /// Checks hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        if !is_hermitian(&self.m, STATE_TOL) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        let (vals, _) = hermitian_eigen(&self.m);
        if let Some(v) = vals.iter().find(|&&v| v < -STATE_TOL) {
            return Err(Error::InvalidState(format!("negative eigenvalue {v}")));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `|bits⟩⟨bits|`.
    pub fn from_basis_state(bits: &BitString) -> Self {
        let n = bits.width();
        let mut m = CMatrix::zeros(1 << n, 1 << n);
        let i = bits.to_index();
        m[(i, i)] = C64::new(1.0, 0.0);
        DensityMatrix { n, m }
    }

    /// `|ψ⟩⟨ψ|` for a normalised amplitude vector.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        let n = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::invalid(format!("state has squared norm {norm}")));
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Ok(DensityMatrix {
            n,
            m: &v * v.adjoint(),
        })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1 << n;
        DensityMatrix {
            n,
            m: CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Real diagonal state.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let diag = nalgebra::DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&diag))
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Diagonal entries as a probability vector over basis strings.
    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            n: self.n + other.n,
            m: self.m.kronecker(&other.m),
        }
    }

    /// `Σ w_i ρ_i` for weights summing to one.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::invalid("mixture needs one weight per state"));
        }
        let n = states[0].n;
        if states.iter().any(|s| s.n != n) {
            return Err(Error::invalid("mixture of states with different qubit counts"));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > STATE_TOL {
            return Err(Error::invalid("mixture weights must form a distribution"));
        }
        let mut m = CMatrix::zeros(1 << n, 1 << n);
        for (w, s) in weights.iter().zip(states) {
            m += &s.m * C64::new(*w, 0.0);
        }
        Ok(DensityMatrix { n, m })
    }

    /// Reduced state on the qubits in `keep` (in ascending order):
    /// `ρ_A(i, j) = Σ_k ρ(ik, jk)`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        if keep.is_empty() {
            return Err(Error::invalid("partial trace must keep at least one qubit"));
        }
        if keep.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("partial trace subset has repeated qubits"));
        }
        if let Some(&q) = keep.iter().find(|&&q| q >= self.n) {
            return Err(Error::invalid(format!("qubit {q} out of range for {} qubits", self.n)));
        }
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let place = |qubits: &[usize], local: usize| -> usize {
            let k = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &q)| 1usize << (self.n - 1 - q))
                .sum()
        };
        let kept_idx: Vec<usize> = (0..1usize << keep.len()).map(|a| place(&keep, a)).collect();
        let traced_idx: Vec<usize> = (0..1usize << traced.len()).map(|t| place(&traced, t)).collect();
        let dim = kept_idx.len();
        let mut out = CMatrix::zeros(dim, dim);
        for (a, &ia) in kept_idx.iter().enumerate() {
            for (b, &ib) in kept_idx.iter().enumerate() {
                let mut s = C64::new(0.0, 0.0);
                for &t in &traced_idx {
                    s += self.m[(ia | t, ib | t)];
                }
                out[(a, b)] = s;
            }
        }
        Ok(DensityMatrix { n: keep.len(), m: out })
    }

    /// `dim D` header followed by one line per row of `re im` pairs.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim());
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.m[(i, j)];
                    format!("{:e} {:e}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing 'dim D' header"))?;
        let dim: usize = header
            .strip_prefix("dim")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::parse(hl, "expected 'dim D'"))?;
        qubits_for_dim(dim).map_err(|e| Error::parse(hl, e.to_string()))?;
        let mut m = CMatrix::zeros(dim, dim);
        let mut row = 0;
        for (ln, line) in lines {
            if row >= dim {
                return Err(Error::parse(ln, format!("more than {dim} rows")));
            }
            let vals = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::parse(ln, format!("bad number '{t}'"))))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != 2 * dim {
                return Err(Error::parse(ln, format!("expected {} numbers, found {}", 2 * dim, vals.len())));
            }
            for j in 0..dim {
                m[(row, j)] = C64::new(vals[2 * j], vals[2 * j + 1]);
            }
            row += 1;
        }
        if row != dim {
            return Err(Error::parse(hl, format!("expected {dim} rows, found {row}")));
        }
        Self::new(m)
    }
}
