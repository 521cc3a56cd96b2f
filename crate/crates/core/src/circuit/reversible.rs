use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::{apply_in_place, apply_to_index, check_wires};
use super::{BitString, ReversibleGate};
use crate::{Error, Result};

/// A gate placed on an ordered list of wires.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: ReversibleGate,
    pub wires: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: ReversibleGate, wires: Vec<usize>) -> Self {
        GateOp { gate, wires }
    }

    #[inline]
    pub fn apply_bits(&self, bits: &mut [bool]) {
        apply_in_place(&self.gate, &self.wires, bits);
    }

    #[inline]
    pub fn apply_index(&self, width: usize, index: usize) -> usize {
        apply_to_index(&self.gate, &self.wires, width, index)
    }
}

/// One time unit: a set of gates on pairwise disjoint wires. Wires not
/// touched by any gate are idle for this unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub ops: Vec<GateOp>,
}

impl Layer {
    pub fn new(ops: Vec<GateOp>) -> Self {
        Layer { ops }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    #[inline]
    pub fn apply_bits(&self, bits: &mut [bool]) {
        for op in &self.ops {
            op.apply_bits(bits);
        }
    }

    /// Image of a register index under the whole layer.
    #[inline]
    pub fn apply_index(&self, width: usize, index: usize) -> usize {
        self.ops
            .iter()
            .fold(index, |acc, op| op.apply_index(width, acc))
    }
}

/// A structural problem found by [`ReversibleCircuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    WireOutOfRange { layer: usize, gate: usize, wire: usize },
    ArityMismatch { layer: usize, gate: usize, arity: usize, wires: usize },
    RepeatedWire { layer: usize, gate: usize, wire: usize },
    /// Two gates of one layer share a wire.
    Overlap { layer: usize, gate: usize, other: usize, wire: usize },
    NotBijective { layer: usize, gate: usize },
    ResultOutOfRange { wire: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::WireOutOfRange { layer, gate, wire } => {
                write!(f, "layer {layer} gate {gate}: wire {wire} out of range")
            }
            Violation::ArityMismatch { layer, gate, arity, wires } => write!(
                f,
                "layer {layer} gate {gate}: arity {arity} but {wires} wires"
            ),
            Violation::RepeatedWire { layer, gate, wire } => {
                write!(f, "layer {layer} gate {gate}: wire {wire} repeated")
            }
            Violation::Overlap { layer, gate, other, wire } => write!(
                f,
                "layer {layer}: gates {other} and {gate} both touch wire {wire}"
            ),
            Violation::NotBijective { layer, gate } => {
                write!(f, "layer {layer} gate {gate}: table is not a permutation")
            }
            Violation::ResultOutOfRange { wire } => write!(f, "result wire {wire} out of range"),
        }
    }
}

/// A width-`N` layered reversible circuit with a designated result wire.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversibleCircuit {
    width: usize,
    layers: Vec<Layer>,
    result_wire: usize,
}

impl ReversibleCircuit {
    /// An empty (depth 0) circuit; the result wire defaults to wire 0.
    pub fn new(width: usize) -> Self {
        ReversibleCircuit {
            width,
            layers: Vec::new(),
            result_wire: 0,
        }
    }

    pub fn from_layers(width: usize, layers: Vec<Layer>, result_wire: usize) -> Self {
        ReversibleCircuit {
            width,
            layers,
            result_wire,
        }
    }

    /// `depth` empty layers: every wire idles for `depth` time units.
    pub fn identity(width: usize, depth: usize) -> Self {
        Self::from_layers(width, vec![Layer::default(); depth], 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(|l| l.ops.len()).sum()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut Vec<Layer> {
        &mut self.layers
    }

    pub fn result_wire(&self) -> usize {
        self.result_wire
    }

    pub fn set_result_wire(&mut self, wire: usize) {
        self.result_wire = wire;
    }

    pub fn push_layer(&mut self, layer: Layer) {
        self.layers.push(layer);
    }

    /// Every violated structural invariant, with its location. Empty means
    /// the circuit is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.result_wire >= self.width {
            out.push(Violation::ResultOutOfRange {
                wire: self.result_wire,
            });
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut owner: Vec<Option<usize>> = vec![None; self.width];
            for (gi, op) in layer.ops.iter().enumerate() {
                if !op.gate.is_bijective() {
                    out.push(Violation::NotBijective { layer: li, gate: gi });
                }
                if op.wires.len() != op.gate.arity() {
                    out.push(Violation::ArityMismatch {
                        layer: li,
                        gate: gi,
                        arity: op.gate.arity(),
                        wires: op.wires.len(),
                    });
                }
                for (j, &w) in op.wires.iter().enumerate() {
                    if w >= self.width {
                        out.push(Violation::WireOutOfRange { layer: li, gate: gi, wire: w });
                        continue;
                    }
                    if op.wires[..j].contains(&w) {
                        out.push(Violation::RepeatedWire { layer: li, gate: gi, wire: w });
                        continue;
                    }
                    match owner[w] {
                        Some(other) => out.push(Violation::Overlap {
                            layer: li,
                            gate: gi,
                            other,
                            wire: w,
                        }),
                        None => owner[w] = Some(gi),
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::invalid(format!("invalid circuit: {v}"))),
        }
    }

    /// Applies every layer in order with no noise.
    pub fn evaluate_noiseless(&self, input: &BitString) -> Result<BitString> {
        if input.width() != self.width {
            return Err(Error::invalid(format!(
                "input has {} bits but the circuit has width {}",
                input.width(),
                self.width
            )));
        }
        let mut out = input.clone();
        for layer in &self.layers {
            for op in &layer.ops {
                check_wires(&op.gate, &op.wires, self.width)?;
                op.apply_bits(out.bits_mut());
            }
        }
        Ok(out)
    }

    /// Appends another circuit of the same width after this one.
    pub fn extend(&mut self, other: &ReversibleCircuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::invalid("cannot concatenate circuits of different widths"));
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(())
    }
}

/// Packs gates into layers as early as possible while keeping program order
/// between any two gates that share a wire.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    width: usize,
    layers: Vec<Layer>,
    ready: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(width: usize) -> Self {
        CircuitBuilder {
            width,
            layers: Vec::new(),
            ready: vec![0; width],
        }
    }

    /// Adds a fresh wire and returns its index.
    pub fn add_wire(&mut self) -> usize {
        self.width += 1;
        self.ready.push(0);
        self.width - 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Schedules `gate` on `wires` and returns the layer it landed in.
    pub fn push(&mut self, gate: ReversibleGate, wires: Vec<usize>) -> Result<usize> {
        check_wires(&gate, &wires, self.width)?;
        let layer = wires.iter().map(|&w| self.ready[w]).max().unwrap_or(0);
        if layer == self.layers.len() {
            self.layers.push(Layer::default());
        }
        for &w in &wires {
            self.ready[w] = layer + 1;
        }
        self.layers[layer].ops.push(GateOp::new(gate, wires));
        Ok(layer)
    }

    pub fn finish(self, result_wire: usize) -> ReversibleCircuit {
        ReversibleCircuit::from_layers(self.width, self.layers, result_wire)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(width: usize, gate: ReversibleGate, wires: Vec<usize>) -> ReversibleCircuit {
        ReversibleCircuit::from_layers(width, vec![Layer::new(vec![GateOp::new(gate, wires)])], 0)
    }

    #[test]
    fn minimal_circuit_is_valid() {
        let c = single(1, ReversibleGate::not(), vec![0]);
        assert!(c.validate().is_empty());
        assert_eq!(c.depth(), 1);
        assert_eq!(c.size(), 1);
    }

    #[test]
    fn shared_wire_in_layer_is_reported() {
        let layer = Layer::new(vec![
            GateOp::new(ReversibleGate::cnot(), vec![0, 2]),
            GateOp::new(ReversibleGate::not(), vec![2]),
        ]);
        let c = ReversibleCircuit::from_layers(3, vec![layer], 0);
        assert_eq!(
            c.validate(),
            vec![Violation::Overlap { layer: 0, gate: 1, other: 0, wire: 2 }]
        );
    }

    #[test]
    fn non_bijective_perm_is_reported() {
        let bad = ReversibleGate::perm_unchecked(vec![5, 5, 0, 1, 2, 3, 4, 6]).unwrap();
        let c = single(3, bad, vec![0, 1, 2]);
        assert_eq!(c.validate(), vec![Violation::NotBijective { layer: 0, gate: 0 }]);
    }

    #[test]
    fn out_of_range_and_arity() {
        let layer = Layer::new(vec![
            GateOp::new(ReversibleGate::cnot(), vec![0, 7]),
            GateOp::new(ReversibleGate::toffoli(), vec![1, 2]),
        ]);
        let mut c = ReversibleCircuit::from_layers(3, vec![layer], 0);
        c.set_result_wire(9);
        let v = c.validate();
        assert!(v.contains(&Violation::ResultOutOfRange { wire: 9 }));
        assert!(v.contains(&Violation::WireOutOfRange { layer: 0, gate: 0, wire: 7 }));
        assert!(v.contains(&Violation::ArityMismatch { layer: 0, gate: 1, arity: 3, wires: 2 }));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = ReversibleCircuit::new(4);
        let x: BitString = "1011".parse().unwrap();
        assert_eq!(c.evaluate_noiseless(&x).unwrap(), x);
    }

    #[test]
    fn maj3_circuit_on_110() {
        let c = single(3, ReversibleGate::maj3(), vec![0, 1, 2]);
        let out = c.evaluate_noiseless(&"110".parse().unwrap()).unwrap();
        assert_eq!(out.to_string(), "110");
        assert!(out.get(0).unwrap());
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let c = ReversibleCircuit::new(3);
        assert!(c.evaluate_noiseless(&"10".parse().unwrap()).is_err());
    }

    #[test]
    fn builder_packs_disjoint_gates_together() {
        let mut b = CircuitBuilder::new(4);
        assert_eq!(b.push(ReversibleGate::not(), vec![0]).unwrap(), 0);
        assert_eq!(b.push(ReversibleGate::not(), vec![1]).unwrap(), 0);
        assert_eq!(b.push(ReversibleGate::cnot(), vec![0, 2]).unwrap(), 1);
        assert_eq!(b.push(ReversibleGate::cnot(), vec![1, 3]).unwrap(), 1);
        assert_eq!(b.push(ReversibleGate::toffoli(), vec![2, 3, 0]).unwrap(), 2);
        let c = b.finish(0);
        assert!(c.is_valid());
        assert_eq!(c.depth(), 3);
    }
}
