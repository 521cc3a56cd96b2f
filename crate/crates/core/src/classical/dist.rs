use serde::{Deserialize, Serialize};

use crate::circuit::{BitString, Layer};
use crate::{Error, Result, NORMALIZATION_TOL};

/// An exact probability vector over `{0,1}^N`, indexed with wire 0 as the
/// most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitDistribution {
    width: usize,
    probs: Vec<f64>,
}

impl BitDistribution {
    pub fn new(width: usize, probs: Vec<f64>) -> Result<Self> {
        if width >= usize::BITS as usize || probs.len() != 1usize << width {
            return Err(Error::invalid(format!(
                "{} probabilities do not cover {width} bits",
                probs.len()
            )));
        }
        if let Some(q) = probs.iter().find(|q| q.is_nan() || **q < 0.0) {
            return Err(Error::invalid(format!("negative or NaN probability {q}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        Ok(BitDistribution { width, probs })
    }

    pub fn point_mass(bits: &BitString) -> Self {
        let mut probs = vec![0.0; 1 << bits.width()];
        probs[bits.to_index()] = 1.0;
        BitDistribution {
            width: bits.width(),
            probs,
        }
    }

    pub fn uniform(width: usize) -> Self {
        let n = 1usize << width;
        BitDistribution {
            width,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Independent bits with `Pr[bit w = 1] = ones[w]`.
    pub fn product(ones: &[f64]) -> Result<Self> {
        let width = ones.len();
        let probs = (0..1usize << width)
            .map(|x| {
                ones.iter()
                    .enumerate()
                    .map(|(w, &q)| if (x >> (width - 1 - w)) & 1 == 1 { q } else { 1.0 - q })
                    .product()
            })
            .collect();
        Self::new(width, probs)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, bits: &BitString) -> f64 {
        self.probs[bits.to_index()]
    }

    /// `Pr[wire = 1]`.
    pub fn marginal(&self, wire: usize) -> f64 {
        let shift = self.width - 1 - wire;
        self.probs
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == 1)
            .map(|(_, q)| q)
            .sum()
    }

    pub fn marginals(&self) -> Vec<f64> {
        (0..self.width).map(|w| self.marginal(w)).collect()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probabilities in ascending order; invariant under permutations.
    pub fn sorted_probs(&self) -> Vec<f64> {
        let mut v = self.probs.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Binary symmetric channel with flip probability `p` on one wire.
    pub fn flip_wire(&mut self, wire: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let mask = 1usize << (self.width - 1 - wire);
        for i in 0..self.probs.len() {
            if i & mask == 0 {
                let (a, b) = (self.probs[i], self.probs[i | mask]);
                self.probs[i] = (1.0 - p) * a + p * b;
                self.probs[i | mask] = p * a + (1.0 - p) * b;
            }
        }
    }

    /// Independent flips with probability `p` on every wire.
    pub fn flip_all(&mut self, p: f64) {
        for w in 0..self.width {
            self.flip_wire(w, p);
        }
    }

    /// Pushes the distribution forward through one circuit layer.
    pub fn apply_layer(&mut self, layer: &Layer) {
        if layer.is_empty() {
            return;
        }
        let mut out = vec![0.0; self.probs.len()];
        for (x, &q) in self.probs.iter().enumerate() {
            out[layer.apply_index(self.width, x)] = q;
        }
        self.probs = out;
    }
}
