//! Reversible gate library, the layered circuit IR and boolean source circuits.

mod bits;
pub mod boolean;
mod gate;
pub mod random;
mod reversible;
pub mod text;

pub use bits::BitString;
pub use boolean::{BoolNode, BoolOp, BooleanCircuit, NodeId};
pub use gate::{apply_gate, GateKind, ReversibleGate};
pub use reversible::{CircuitBuilder, GateOp, Layer, ReversibleCircuit, Violation};
