//! Leveled boolean circuits, the compiler's source language.
//!
//! Text format, one node per line, listed in topological order:
//!
//! ```text
//! inputs 2
//! 0 0 INPUT 0
//! 1 0 INPUT 1
//! 2 1 AND 0 1
//! output 2
//! ```
//!
//! A node line is `<id> <level> <KIND> [operands]`; ids must be `0, 1, 2, ...`
//! in order and operands must refer to earlier nodes of strictly lower level.

use serde::{Deserialize, Serialize};

use super::BitString;
use crate::{Error, Result};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoolOp {
    Input(usize),
    Const(bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Not(NodeId),
    /// Explicit copy of a value.
    Fanout(NodeId),
}

impl BoolOp {
    pub fn operands(&self) -> Vec<NodeId> {
        match *self {
            BoolOp::Input(_) | BoolOp::Const(_) => vec![],
            BoolOp::And(a, b) | BoolOp::Or(a, b) => vec![a, b],
            BoolOp::Not(a) | BoolOp::Fanout(a) => vec![a],
        }
    }

    pub fn is_gate(&self) -> bool {
        !matches!(self, BoolOp::Input(_) | BoolOp::Const(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolNode {
    pub op: BoolOp,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanCircuit {
    inputs: usize,
    nodes: Vec<BoolNode>,
    output: NodeId,
}

impl BooleanCircuit {
    pub fn new(inputs: usize, nodes: Vec<BoolNode>, output: NodeId) -> Result<Self> {
        let c = BooleanCircuit {
            inputs,
            nodes,
            output,
        };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        if self.output >= self.nodes.len() {
            return Err(Error::invalid(format!("output node {} does not exist", self.output)));
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let BoolOp::Input(i) = node.op {
                if i >= self.inputs {
                    return Err(Error::invalid(format!(
                        "node {id} reads input {i} but there are {} inputs",
                        self.inputs
                    )));
                }
            }
            for a in node.op.operands() {
                if a >= id {
                    return Err(Error::invalid(format!(
                        "node {id} uses node {a}, which is not an earlier node"
                    )));
                }
                if self.nodes[a].level >= node.level {
                    return Err(Error::invalid(format!(
                        "node {id} at level {} uses node {a} at level {}",
                        node.level, self.nodes[a].level
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn nodes(&self) -> &[BoolNode] {
        &self.nodes
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Number of gate nodes (everything except inputs and constants).
    pub fn size(&self) -> usize {
        self.nodes.iter().filter(|n| n.op.is_gate()).count()
    }

    /// Value of every node on input `x`.
    pub fn evaluate_all(&self, x: &BitString) -> Result<Vec<bool>> {
        if x.width() != self.inputs {
            return Err(Error::invalid(format!(
                "input has {} bits, circuit has {} inputs",
                x.width(),
                self.inputs
            )));
        }
        let mut vals = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node.op {
                BoolOp::Input(i) => x.bits()[i],
                BoolOp::Const(c) => c,
                BoolOp::And(a, b) => vals[a] && vals[b],
                BoolOp::Or(a, b) => vals[a] || vals[b],
                BoolOp::Not(a) => !vals[a],
                BoolOp::Fanout(a) => vals[a],
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn evaluate(&self, x: &BitString) -> Result<bool> {
        Ok(self.evaluate_all(x)?[self.output])
    }

    /// Two-input AND.
    pub fn and2() -> Self {
        Self::binary(BoolOp::And)
    }

    /// Two-input OR.
    pub fn or2() -> Self {
        Self::binary(BoolOp::Or)
    }

    fn binary(op: fn(NodeId, NodeId) -> BoolOp) -> Self {
        let nodes = vec![
            BoolNode { op: BoolOp::Input(0), level: 0 },
            BoolNode { op: BoolOp::Input(1), level: 0 },
            BoolNode { op: op(0, 1), level: 1 },
        ];
        Self::new(2, nodes, 2).expect("well-formed")
    }

    /// `x0 ⊕ x1` as `(x0 ∨ x1) ∧ ¬(x0 ∧ x1)`.
    pub fn xor2() -> Self {
        let nodes = vec![
            BoolNode { op: BoolOp::Input(0), level: 0 },
            BoolNode { op: BoolOp::Input(1), level: 0 },
            BoolNode { op: BoolOp::Or(0, 1), level: 1 },
            BoolNode { op: BoolOp::And(0, 1), level: 1 },
            BoolNode { op: BoolOp::Not(3), level: 2 },
            BoolNode { op: BoolOp::And(2, 4), level: 3 },
        ];
        Self::new(2, nodes, 5).expect("well-formed")
    }
}

pub fn serialize(circuit: &BooleanCircuit) -> String {
    let mut out = format!("inputs {}\n", circuit.inputs);
    for (id, node) in circuit.nodes.iter().enumerate() {
        let body = match node.op {
            BoolOp::Input(i) => format!("INPUT {i}"),
            BoolOp::Const(false) => "CONST0".to_string(),
            BoolOp::Const(true) => "CONST1".to_string(),
            BoolOp::And(a, b) => format!("AND {a} {b}"),
            BoolOp::Or(a, b) => format!("OR {a} {b}"),
            BoolOp::Not(a) => format!("NOT {a}"),
            BoolOp::Fanout(a) => format!("FANOUT {a}"),
        };
        out.push_str(&format!("{id} {} {body}\n", node.level));
    }
    out.push_str(&format!("output {}\n", circuit.output));
    out
}

pub fn parse(text: &str) -> Result<BooleanCircuit> {
    let mut inputs = None;
    let mut output = None;
    let mut nodes = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| Error::parse(ln, format!("expected a number, found '{t}'")))
        };
        match toks.as_slice() {
            ["inputs", n] if inputs.is_none() => inputs = Some(num(n)?),
            ["output", id] if output.is_none() => output = Some((num(id)?, ln)),
            [id, level, kind, args @ ..] => {
                if inputs.is_none() {
                    return Err(Error::parse(ln, "node listed before 'inputs N'"));
                }
                let id = num(id)?;
                if id != nodes.len() {
                    return Err(Error::parse(
                        ln,
                        format!("expected node id {}, found {id}", nodes.len()),
                    ));
                }
                let level = num(level)?;
                let args = args.iter().map(|a| num(a)).collect::<Result<Vec<_>>>()?;
                let op = match (*kind, args.as_slice()) {
                    ("INPUT", [i]) => BoolOp::Input(*i),
                    ("CONST0", []) => BoolOp::Const(false),
                    ("CONST1", []) => BoolOp::Const(true),
                    ("AND", [a, b]) => BoolOp::And(*a, *b),
                    ("OR", [a, b]) => BoolOp::Or(*a, *b),
                    ("NOT", [a]) => BoolOp::Not(*a),
                    ("FANOUT", [a]) => BoolOp::Fanout(*a),
                    _ => {
                        return Err(Error::parse(
                            ln,
                            format!("bad node '{kind}' with {} operands", args.len()),
                        ))
                    }
                };
                nodes.push(BoolNode { op, level });
                // Structural checks per line so errors point at the node.
                let partial = BooleanCircuit {
                    inputs: inputs.unwrap_or(0),
                    nodes: nodes.clone(),
                    output: id,
                };
                partial.check().map_err(|e| Error::parse(ln, e.to_string()))?;
            }
            _ => return Err(Error::parse(ln, format!("unrecognised line '{line}'"))),
        }
    }
    let inputs = inputs.ok_or_else(|| Error::parse(1, "missing 'inputs N' line"))?;
    let (output, oline) = output.ok_or_else(|| Error::parse(last_line.max(1), "missing 'output ID' line"))?;
    BooleanCircuit::new(inputs, nodes, output).map_err(|e| Error::parse(oline, e.to_string()))
}
