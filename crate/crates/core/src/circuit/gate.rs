use std::fmt;

use serde::{Deserialize, Serialize};

use super::BitString;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
    /// Three-bit reversible majority: swaps `100 ↔ 011`, fixes the rest. The
    /// first output is the majority of the three inputs.
    Maj3,
    Perm,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Maj3 => "MAJ3",
            GateKind::Perm => "PERM",
        }
    }
}

/// A `k`-in/`k`-out gate given by its truth table on `{0,1}^k`.
///
/// Local indices follow the wire order of the gate application: the first
/// wire is the most significant bit, so the MAJ3 entry `table[0b100] = 0b011`
/// reads as `|100⟩ ↦ |011⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReversibleGate {
    kind: GateKind,
    arity: usize,
    table: Vec<usize>,
}

impl ReversibleGate {
    pub fn not() -> Self {
        Self::named(GateKind::Not, 1, vec![1, 0])
    }

    /// Control first, target second.
    pub fn cnot() -> Self {
        Self::named(GateKind::Cnot, 2, vec![0, 1, 3, 2])
    }

    /// Two controls, then the target.
    pub fn toffoli() -> Self {
        Self::named(GateKind::Toffoli, 3, vec![0, 1, 2, 3, 4, 5, 7, 6])
    }

    pub fn maj3() -> Self {
        Self::named(GateKind::Maj3, 3, vec![0, 1, 2, 4, 3, 5, 6, 7])
    }

    fn named(kind: GateKind, arity: usize, table: Vec<usize>) -> Self {
        ReversibleGate { kind, arity, table }
    }

    /// An arbitrary permutation gate. The table length must be a power of two
    /// and the entries a permutation of `0..len`.
    pub fn perm(table: Vec<usize>) -> Result<Self> {
        let gate = Self::perm_unchecked(table)?;
        if !gate.is_bijective() {
            return Err(Error::invalid("PERM table is not a permutation"));
        }
        Ok(gate)
    }

    /// Like [`ReversibleGate::perm`] but accepts non-bijective tables, so that
    /// malformed gates can be represented and reported by circuit validation.
    /// The table length must still be a power of two `≥ 2`.
    pub fn perm_unchecked(table: Vec<usize>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "PERM table length {len} is not a power of two >= 2"
            )));
        }
        Ok(ReversibleGate {
            kind: GateKind::Perm,
            arity: len.trailing_zeros() as usize,
            table,
        })
    }

    /// Reversible `OR` onto a target: `(a, b, c) ↦ (a, b, c ⊕ (a ∨ b))`.
    pub fn or_into() -> Self {
        let table = (0..8usize)
            .map(|x| {
                let (a, b) = (x >> 2 & 1, x >> 1 & 1);
                x ^ (a | b)
            })
            .collect();
        Self::perm(table).expect("OR table is a permutation")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_bijective(&self) -> bool {
        let mut sorted = self.table.clone();
        sorted.sort_unstable();
        sorted.iter().enumerate().all(|(i, &v)| i == v)
    }

    #[inline]
    pub fn image(&self, local: usize) -> usize {
        self.table[local]
    }

    /// The inverse gate. Only meaningful for bijective tables.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y] = x;
        }
        match self.kind {
            // Named gates are involutions.
            GateKind::Perm => ReversibleGate {
                kind: GateKind::Perm,
                arity: self.arity,
                table: inv,
            },
            _ => self.clone(),
        }
    }
}

impl fmt::Display for ReversibleGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Perm => {
                f.write_str("PERM[")?;
                for (i, v) in self.table.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            kind => f.write_str(kind.name()),
        }
    }
}

pub(crate) fn check_wires(gate: &ReversibleGate, wires: &[usize], width: usize) -> Result<()> {
    if wires.len() != gate.arity() {
        return Err(Error::invalid(format!(
            "{} has arity {} but was given {} wires",
            gate.kind().name(),
            gate.arity(),
            wires.len()
        )));
    }
    for (i, &w) in wires.iter().enumerate() {
        if w >= width {
            return Err(Error::invalid(format!(
                "wire {w} out of range for width {width}"
            )));
        }
        if wires[..i].contains(&w) {
            return Err(Error::invalid(format!("wire {w} repeated in one gate")));
        }
    }
    Ok(())
}

/// Replaces the bits at `wires` by their image under `gate`; all other bits are
/// copied unchanged.
pub fn apply_gate(state: &BitString, gate: &ReversibleGate, wires: &[usize]) -> Result<BitString> {
    check_wires(gate, wires, state.width())?;
    let mut out = state.clone();
    apply_in_place(gate, wires, out.bits_mut());
    Ok(out)
}

#[inline]
pub(crate) fn apply_in_place(gate: &ReversibleGate, wires: &[usize], bits: &mut [bool]) {
    let local = wires
        .iter()
        .fold(0usize, |acc, &w| (acc << 1) | usize::from(bits[w]));
    let image = gate.image(local);
    let k = wires.len();
    for (j, &w) in wires.iter().enumerate() {
        bits[w] = (image >> (k - 1 - j)) & 1 == 1;
    }
}

/// Image of a full-register index (wire 0 most significant) under a gate.
#[inline]
pub(crate) fn apply_to_index(gate: &ReversibleGate, wires: &[usize], width: usize, index: usize) -> usize {
    let k = wires.len();
    let mut local = 0usize;
    let mut cleared = index;
    for &w in wires {
        let shift = width - 1 - w;
        local = (local << 1) | ((index >> shift) & 1);
        cleared &= !(1 << shift);
    }
    let image = gate.image(local);
    let mut out = cleared;
    for (j, &w) in wires.iter().enumerate() {
        out |= ((image >> (k - 1 - j)) & 1) << (width - 1 - w);
    }
    out
}
