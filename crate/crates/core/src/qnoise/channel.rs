use serde::{Deserialize, Serialize};

use crate::quantum::{DensityMatrix, C64};
use crate::{Error, Result};

/// Per-qubit, per-step probability of replacing a qubit by the maximally
/// mixed state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplacementChannelParams {
    p: f64,
}

impl ReplacementChannelParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("replacement probability {p} is outside [0, 1]")));
        }
        Ok(ReplacementChannelParams { p })
    }

    pub fn noiseless() -> Self {
        ReplacementChannelParams { p: 0.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `(1-p) ρ + p (tr_q ρ) ⊗ I/2` with the fresh qubit put back at position `q`.
///
/// Entries whose row and column differ in bit `q` are scaled by `1-p`; the
/// two entries of each diagonal-in-`q` pair are pulled towards their mean.
pub fn replace_qubit(rho: &DensityMatrix, q: usize, p: f64) -> Result<DensityMatrix> {
    let n = rho.qubits();
    if q >= n {
        return Err(Error::invalid(format!("qubit {q} out of range for {n} qubits")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("replacement probability {p} is outside [0, 1]")));
    }
    let bit = 1usize << (n - 1 - q);
    let mut m = rho.matrix().clone();
    let keep = C64::new(1.0 - p, 0.0);
    let half = C64::new(p / 2.0, 0.0);
    let dim = rho.dim();
    for i in (0..dim).filter(|i| i & bit == 0) {
        for j in (0..dim).filter(|j| j & bit == 0) {
            let (a, b) = (m[(i, j)], m[(i | bit, j | bit)]);
            let avg = (a + b) * half;
            m[(i, j)] = a * keep + avg;
            m[(i | bit, j | bit)] = b * keep + avg;
            m[(i | bit, j)] *= keep;
            m[(i, j | bit)] *= keep;
        }
    }
    Ok(DensityMatrix::from_parts(n, m))
}

/// One noise step: every qubit independently replaced with probability `p`.
/// The single-qubit maps commute, so the order of qubits does not matter.
pub fn apply_replacement_noise(rho: &DensityMatrix, params: &ReplacementChannelParams) -> DensityMatrix {
    if params.p == 0.0 {
        return rho.clone();
    }
    let mut out = rho.clone();
    for q in 0..rho.qubits() {
        out = replace_qubit(&out, q, params.p).expect("qubit index in range");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::BitString;
    use crate::quantum::{quantum_information, random_density_matrix};

    #[test]
    fn single_qubit_example() {
        let zero = DensityMatrix::from_basis_state(&BitString::zeros(1));
        let out = apply_replacement_noise(&zero, &ReplacementChannelParams::new(0.2).unwrap());
        let want = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        assert!((out.matrix() - want.matrix()).camax() < 1e-15);
        let info = quantum_information(&out).unwrap();
        assert!((info - 0.5310044064107188).abs() < 1e-12);
        assert!(info <= 0.8 * quantum_information(&zero).unwrap());
    }

    #[test]
    fn endpoints() {
        let rho = random_density_matrix(3, 2, 9).unwrap();
        assert_eq!(apply_replacement_noise(&rho, &ReplacementChannelParams::noiseless()), rho);
        let full = apply_replacement_noise(&rho, &ReplacementChannelParams::new(1.0).unwrap());
        assert!((full.matrix() - DensityMatrix::maximally_mixed(3).matrix()).camax() < 1e-15);
        assert!(ReplacementChannelParams::new(1.5).is_err());
        assert!(ReplacementChannelParams::new(-0.1).is_err());
    }

    #[test]
    fn matches_partial_trace_definition() {
        let rho = random_density_matrix(3, 3, 4).unwrap();
        let p = 0.3;
        for q in 0..3 {
            let out = replace_qubit(&rho, q, p).unwrap();
            let rest: Vec<usize> = (0..3).filter(|&x| x != q).collect();
            let reduced = rho.partial_trace(&rest).unwrap();
            // Rebuild Tr_q ρ ⊗ I/2 with the new qubit at position q.
            let mixed = DensityMatrix::maximally_mixed(1);
            let expected_replaced = match q {
                0 => mixed.tensor(&reduced),
                2 => reduced.tensor(&mixed),
                _ => {
                    let a = rho.partial_trace(&[0, 2]).unwrap();
                    // ρ_{02} ⊗ I/2 with I/2 moved to the middle.
                    let m = crate::quantum::CMatrix::from_fn(8, 8, |r, c| {
                        let (r0, r2, r1) = (r >> 2 & 1, r & 1, r >> 1 & 1);
                        let (c0, c2, c1) = (c >> 2 & 1, c & 1, c >> 1 & 1);
                        if r1 == c1 {
                            a.matrix()[(r0 * 2 + r2, c0 * 2 + c2)] * 0.5
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    });
                    DensityMatrix::new(m).unwrap()
                }
            };
            let want = rho.matrix() * C64::new(1.0 - p, 0.0) + expected_replaced.matrix() * C64::new(p, 0.0);
            assert!((out.matrix() - want).camax() < 1e-12, "qubit {q}");
        }
    }

    #[test]
    fn qubit_order_does_not_matter() {
        let rho = random_density_matrix(3, 4, 11).unwrap();
        let mut rev = rho.clone();
        for q in (0..3).rev() {
            rev = replace_qubit(&rev, q, 0.37).unwrap();
        }
        let fwd = apply_replacement_noise(&rho, &ReplacementChannelParams::new(0.37).unwrap());
        assert!((fwd.matrix() - rev.matrix()).camax() < 1e-10);
    }
}
