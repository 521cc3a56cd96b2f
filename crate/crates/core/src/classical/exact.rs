use super::{BitDistribution, NoiseModel};
use crate::circuit::{BitString, ReversibleCircuit};
use crate::{Error, Result};

/// Largest width propagated exactly unless overridden (`2^20` entries).
pub const DEFAULT_EXACT_CAP: usize = 20;

/// A point in the noise/computation schedule, reported to observers of
/// [`propagate_exact_with`] after it has been applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The `m`-th noise step (1-based).
    Noise(usize),
    /// Layer `l` (0-based) of the circuit.
    Layer(usize),
}

pub(crate) fn check_cap(width: usize, cap: usize) -> Result<()> {
    if width > cap {
        return Err(Error::ResourceLimit {
            what: "circuit width",
            requested: width,
            cap,
        });
    }
    Ok(())
}

/// Exact output distribution of `circuit` on `input` under `noise`.
pub fn propagate_exact(circuit: &ReversibleCircuit, noise: &NoiseModel, input: &BitString) -> Result<BitDistribution> {
    propagate_exact_with(circuit, noise, input, DEFAULT_EXACT_CAP, |_, _| {})
}

/// [`propagate_exact`] with an explicit width cap and an observer called after
/// every noise step and every layer.
pub fn propagate_exact_with<F>(
    circuit: &ReversibleCircuit,
    noise: &NoiseModel,
    input: &BitString,
    cap: usize,
    mut observe: F,
) -> Result<BitDistribution>
where
    F: FnMut(Stage, &BitDistribution),
{
    check_cap(circuit.width(), cap)?;
    circuit.ensure_valid()?;
    if input.width() != circuit.width() {
        return Err(Error::invalid(format!(
            "input has {} bits but the circuit has width {}",
            input.width(),
            circuit.width()
        )));
    }
    let mut dist = BitDistribution::point_mass(input);
    let mut step = 0;
    for (l, layer) in circuit.layers().iter().enumerate() {
        step += 1;
        dist.flip_all(noise.p());
        observe(Stage::Noise(step), &dist);
        dist.apply_layer(layer);
        observe(Stage::Layer(l), &dist);
    }
    if noise.final_noise() {
        dist.flip_all(noise.p());
        observe(Stage::Noise(step + 1), &dist);
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateOp, Layer, ReversibleGate};

    /// Two-state Markov chain `[[1-p, p], [p, 1-p]]` raised to the `m`-th power
    /// by repeated multiplication.
    fn markov_flip(p: f64, m: usize) -> f64 {
        let step = [[1.0 - p, p], [p, 1.0 - p]];
        let mut acc = [[1.0, 0.0], [0.0, 1.0]];
        for _ in 0..m {
            let mut next = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    next[i][j] = (0..2).map(|k| acc[i][k] * step[k][j]).sum();
                }
            }
            acc = next;
        }
        acc[0][1]
    }

    #[test]
    fn noiseless_is_a_point_mass() {
        let c = ReversibleCircuit::from_layers(
            3,
            vec![
                Layer::new(vec![GateOp::new(ReversibleGate::toffoli(), vec![0, 1, 2])]),
                Layer::new(vec![GateOp::new(ReversibleGate::maj3(), vec![2, 0, 1])]),
            ],
            0,
        );
        let x: BitString = "110".parse().unwrap();
        let d = propagate_exact(&c, &NoiseModel::noiseless(), &x).unwrap();
        assert_eq!(d.prob(&c.evaluate_noiseless(&x).unwrap()), 1.0);
    }

    #[test]
    fn idle_wire_matches_markov_chain() {
        let p: f64 = 0.1;
        for m in [1usize, 2, 5] {
            let closed = (1.0 - (1.0 - 2.0 * p).powi(m as i32)) / 2.0;
            assert!((closed - markov_flip(p, m)).abs() < 1e-14);
            // m noise steps: depth m with no final step.
            let c = ReversibleCircuit::identity(1, m);
            let noise = NoiseModel::new(p).unwrap().with_final_noise(false);
            let d = propagate_exact(&c, &noise, &"0".parse().unwrap()).unwrap();
            assert!((d.marginal(0) - closed).abs() < 1e-14, "m = {m}");
            // Same count with the trailing step on.
            let c = ReversibleCircuit::identity(1, m - 1);
            let d = propagate_exact(&c, &NoiseModel::new(p).unwrap(), &"0".parse().unwrap()).unwrap();
            assert!((d.marginal(0) - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn near_half_noise_is_near_uniform() {
        let c = ReversibleCircuit::from_layers(
            3,
            (0..20)
                .map(|i| Layer::new(vec![GateOp::new(ReversibleGate::maj3(), vec![i % 3, (i + 1) % 3, (i + 2) % 3])]))
                .collect(),
            0,
        );
        let d = propagate_exact(&c, &NoiseModel::new(0.499).unwrap(), &"101".parse().unwrap()).unwrap();
        for q in d.probs() {
            assert!((q - 0.125).abs() < 1e-3);
        }
    }

    #[test]
    fn width_cap() {
        let c = ReversibleCircuit::new(21);
        let err = propagate_exact(&c, &NoiseModel::noiseless(), &BitString::zeros(21)).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                what: "circuit width",
                requested: 21,
                cap: 20
            }
        );
    }

    #[test]
    fn observer_sees_every_stage() {
        let c = ReversibleCircuit::identity(2, 3);
        let mut stages = Vec::new();
        propagate_exact_with(&c, &NoiseModel::new(0.1).unwrap(), &"00".parse().unwrap(), 20, |s, _| stages.push(s))
            .unwrap();
        assert_eq!(
            stages,
            vec![
                Stage::Noise(1),
                Stage::Layer(0),
                Stage::Noise(2),
                Stage::Layer(1),
                Stage::Noise(3),
                Stage::Layer(2),
                Stage::Noise(4)
            ]
        );
    }
}
