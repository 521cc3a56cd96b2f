//! Boolean-to-reversible compilation and the majority-replication encoding.
//!
//! [`to_reversible`] is a forward-only Bennett conversion: every irreversible
//! node writes its value onto a fresh zero ancilla and nothing is uncomputed.
//! [`encode_fault_tolerant`] replaces each wire by a block of `3^d` wires and
//! runs simulated step `i` on the `3^(d-i)` good bits of each block, followed
//! by a layer of MAJ3 gates that distils `3^(d-i-1)` good bits for the next
//! step.

use serde::{Deserialize, Serialize};

use crate::circuit::{
    BitString, BoolOp, BooleanCircuit, CircuitBuilder, GateOp, Layer, ReversibleCircuit,
    ReversibleGate,
};
use crate::{Error, Result};

/// Compiles `bc` so that on input `x·0…0` the result wire carries `f(x)`.
///
/// Wires `0..n` hold the inputs. AND, OR and FANOUT nodes each take one
/// fresh ancilla (Toffoli, reversible OR, CNOT copy). A NOT whose operand has
/// no other consumer is applied in place; otherwise the operand is first
/// copied onto an ancilla. Constants take one ancilla each.
pub fn to_reversible(bc: &BooleanCircuit) -> Result<ReversibleCircuit> {
    let nodes = bc.nodes();
    let mut consumers = vec![0usize; nodes.len()];
    for node in nodes {
        for a in node.op.operands() {
            consumers[a] += 1;
        }
    }
    consumers[bc.output()] += 1;

    let mut b = CircuitBuilder::new(bc.inputs());
    let mut wire_of: Vec<usize> = Vec::with_capacity(nodes.len());
    for node in nodes {
        let wire = match node.op {
            BoolOp::Input(i) => i,
            BoolOp::Const(value) => {
                let anc = b.add_wire();
                if value {
                    b.push(ReversibleGate::not(), vec![anc])?;
                }
                anc
            }
            BoolOp::And(x, y) | BoolOp::Or(x, y) => {
                let (wx, wy) = (wire_of[x], wire_of[y]);
                let anc = b.add_wire();
                if wx == wy {
                    // x ∧ x = x ∨ x = x
                    b.push(ReversibleGate::cnot(), vec![wx, anc])?;
                } else if matches!(node.op, BoolOp::And(..)) {
                    b.push(ReversibleGate::toffoli(), vec![wx, wy, anc])?;
                } else {
                    b.push(ReversibleGate::or_into(), vec![wx, wy, anc])?;
                }
                anc
            }
            BoolOp::Fanout(x) => {
                let anc = b.add_wire();
                b.push(ReversibleGate::cnot(), vec![wire_of[x], anc])?;
                anc
            }
            BoolOp::Not(x) => {
                let wx = wire_of[x];
                if consumers[x] == 1 {
                    b.push(ReversibleGate::not(), vec![wx])?;
                    wx
                } else {
                    let anc = b.add_wire();
                    b.push(ReversibleGate::cnot(), vec![wx, anc])?;
                    b.push(ReversibleGate::not(), vec![anc])?;
                    anc
                }
            }
        };
        wire_of.push(wire);
    }
    Ok(b.finish(wire_of[bc.output()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    /// Replication exponent: each wire becomes `3^d` wires.
    pub d: usize,
    /// Maximum gate fan-in of the source circuit.
    pub k: usize,
    /// Physical flip probability the encoding is designed for.
    pub p: f64,
}

impl EncodingParams {
    pub fn new(d: usize, k: usize, p: f64) -> Result<Self> {
        let params = EncodingParams { d, k, p };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::invalid("fan-in k must be at least 1"));
        }
        if !(0.0..0.5).contains(&self.p) {
            return Err(Error::invalid(format!("p = {} is outside [0, 1/2)", self.p)));
        }
        if self.d > 12 {
            return Err(Error::ResourceLimit {
                what: "encoding depth",
                requested: self.d,
                cap: 12,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub holds: bool,
    /// `3((2k+1)p)^2 + ((2k+1)p)^3`, the error bound after one majority vote.
    pub bound: f64,
    /// `p - bound`.
    pub margin: f64,
}

/// Whether one simulated step keeps the good-bit error below `p` for fan-in
/// `k`: two noise steps and a gate spread an error `≤ p` to `≤ (2k+1)p`, and a
/// majority vote over three independent copies brings it back.
pub fn threshold_holds(p: f64, k: usize) -> ThresholdCheck {
    let q = (2 * k + 1) as f64 * p;
    let bound = 3.0 * q * q + q * q * q;
    ThresholdCheck {
        holds: bound <= p,
        bound,
        margin: p - bound,
    }
}

/// The result of [`encode_fault_tolerant`], with enough layout information to
/// encode inputs and locate good bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodedCircuit {
    pub circuit: ReversibleCircuit,
    pub source_width: usize,
    pub d: usize,
}

impl EncodedCircuit {
    /// Wires per logical wire, `3^d`.
    pub fn block(&self) -> usize {
        3usize.pow(self.d as u32)
    }

    /// Replicates every logical input bit across its block.
    pub fn encode_input(&self, x: &BitString) -> Result<BitString> {
        if x.width() != self.source_width {
            return Err(Error::invalid(format!(
                "input has {} bits, source circuit has width {}",
                x.width(),
                self.source_width
            )));
        }
        let block = self.block();
        Ok(BitString::new(
            x.bits()
                .iter()
                .flat_map(|&b| std::iter::repeat_n(b, block))
                .collect(),
        ))
    }

    /// Physical wires holding the good bits of `logical` at `level`
    /// (`0 ≤ level ≤ d`): `3^(d-level)` wires spaced `3^level` apart.
    pub fn good_bits(&self, level: usize, logical: usize) -> Vec<usize> {
        let base = logical * self.block();
        let stride = 3usize.pow(level as u32);
        let count = 3usize.pow((self.d - level) as u32);
        (0..count).map(|j| base + j * stride).collect()
    }

    /// Index of the MAJ3 layer that ends simulated step `step`.
    pub fn majority_layer(&self, step: usize) -> usize {
        2 * step + 1
    }

    /// The good result bit after the last step.
    pub fn result_wire(&self) -> usize {
        self.circuit.result_wire()
    }
}

/// Replicates `rc` over `3^d`-wire blocks with a majority layer after every
/// simulated step. Circuits shallower than `d` are padded with idle steps, so
/// the output always has depth `2d`. `d = 0` passes the circuit through.
pub fn encode_fault_tolerant(rc: &ReversibleCircuit, params: EncodingParams) -> Result<EncodedCircuit> {
    params.validate()?;
    rc.ensure_valid()?;
    let d = params.d;
    if d == 0 {
        return Ok(EncodedCircuit {
            circuit: rc.clone(),
            source_width: rc.width(),
            d,
        });
    }
    if rc.depth() > d {
        return Err(Error::invalid(format!(
            "circuit depth {} exceeds encoding depth d = {d}",
            rc.depth()
        )));
    }
    let block = 3usize.pow(d as u32);
    let width = rc
        .width()
        .checked_mul(block)
        .ok_or_else(|| Error::invalid("encoded width overflows"))?;

    let mut layers = Vec::with_capacity(2 * d);
    for step in 0..d {
        let stride = 3usize.pow(step as u32);
        let copies = 3usize.pow((d - step) as u32);
        let mut gates = Vec::new();
        if let Some(layer) = rc.layers().get(step) {
            for op in &layer.ops {
                for j in 0..copies {
                    let wires = op.wires.iter().map(|&w| w * block + j * stride).collect();
                    gates.push(GateOp::new(op.gate.clone(), wires));
                }
            }
        }
        layers.push(Layer::new(gates));

        let mut votes = Vec::with_capacity(rc.width() * copies / 3);
        for logical in 0..rc.width() {
            let base = logical * block;
            for m in 0..copies / 3 {
                let first = base + 3 * m * stride;
                votes.push(GateOp::new(
                    ReversibleGate::maj3(),
                    vec![first, first + stride, first + 2 * stride],
                ));
            }
        }
        layers.push(Layer::new(votes));
    }
    let circuit = ReversibleCircuit::from_layers(width, layers, rc.result_wire() * block);
    Ok(EncodedCircuit {
        circuit,
        source_width: rc.width(),
        d,
    })
}

/// Size and depth of a compilation, as reported by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    pub source_depth: usize,
    pub source_size: usize,
    pub reversible_width: usize,
    pub reversible_depth: usize,
    pub reversible_size: usize,
    pub encoded_width: usize,
    pub encoded_depth: usize,
    pub encoded_size: usize,
}

impl Accounting {
    pub fn new(bc: &BooleanCircuit, rc: &ReversibleCircuit, enc: &EncodedCircuit) -> Self {
        Accounting {
            source_depth: bc.depth(),
            source_size: bc.size(),
            reversible_width: rc.width(),
            reversible_depth: rc.depth(),
            reversible_size: rc.size(),
            encoded_width: enc.circuit.width(),
            encoded_depth: enc.circuit.depth(),
            encoded_size: enc.circuit.size(),
        }
    }
}
