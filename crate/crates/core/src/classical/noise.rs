use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Independent bit flips with probability `p` on every wire in every time
/// unit, idle wires included.
///
/// The schedule of a depth-`D` circuit is `(noise, layer) × D`, optionally
/// followed by one more noise step on the outputs (`final_noise`, on by
/// default).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    p: f64,
    final_noise: bool,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::invalid(format!(
                "flip probability {p} is outside [0, 1/2)"
            )));
        }
        Ok(NoiseModel {
            p,
            final_noise: true,
        })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            p: 0.0,
            final_noise: true,
        }
    }

    pub fn with_final_noise(mut self, on: bool) -> Self {
        self.final_noise = on;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn final_noise(&self) -> bool {
        self.final_noise
    }

    /// Number of noise steps a depth-`depth` circuit goes through.
    pub fn noise_steps(&self, depth: usize) -> usize {
        depth + usize::from(self.final_noise)
    }
}
