//! Seeded random circuits for tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{GateOp, Layer, ReversibleCircuit, ReversibleGate};

/// A random bijection on `k` bits.
pub fn random_perm_gate<R: Rng + ?Sized>(k: usize, rng: &mut R) -> ReversibleGate {
    let mut table: Vec<usize> = (0..1usize << k).collect();
    table.shuffle(rng);
    ReversibleGate::perm(table).expect("shuffled table is a bijection")
}

fn random_gate<R: Rng + ?Sized>(max_arity: usize, rng: &mut R) -> ReversibleGate {
    match rng.random_range(0..6) {
        0 => ReversibleGate::not(),
        1 if max_arity >= 2 => ReversibleGate::cnot(),
        2 if max_arity >= 3 => ReversibleGate::toffoli(),
        3 if max_arity >= 3 => ReversibleGate::maj3(),
        4 if max_arity >= 3 => ReversibleGate::or_into(),
        _ => random_perm_gate(rng.random_range(1..=max_arity.min(3)), rng),
    }
}

/// Layers are filled by shuffling the wires and placing gates left to right;
/// each wire is left idle with probability about one third.
pub fn random_circuit<R: Rng + ?Sized>(width: usize, depth: usize, rng: &mut R) -> ReversibleCircuit {
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut wires: Vec<usize> = (0..width).collect();
        wires.shuffle(rng);
        let mut ops = Vec::new();
        let mut at = 0;
        while at < width {
            if rng.random_range(0..3) == 0 {
                at += 1;
                continue;
            }
            let gate = random_gate(width - at, rng);
            let k = gate.arity();
            ops.push(GateOp::new(gate, wires[at..at + k].to_vec()));
            at += k;
        }
        layers.push(Layer::new(ops));
    }
    let result = if width == 0 { 0 } else { rng.random_range(0..width) };
    ReversibleCircuit::from_layers(width, layers, result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_circuits_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for w in 1..12 {
            let c = random_circuit(w, 5, &mut rng);
            assert!(c.is_valid(), "{:?}", c.validate());
            assert_eq!(c.depth(), 5);
        }
    }
}
