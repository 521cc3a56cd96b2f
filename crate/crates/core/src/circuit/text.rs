//! Line-oriented text format for [`ReversibleCircuit`].
//!
//! ```text
//! width 3 result 2 depth 1
//! 0 TOFFOLI 0,1,2
//! ```
//!
//! The header names the width and the result wire; `depth` is optional and
//! only needed to keep trailing idle layers. Each further line places one gate:
//! `<layer> <gate> <wire>,<wire>,...`. Gates are `NOT`, `CNOT`, `TOFFOLI`,
//! `MAJ3` or `PERM[t0,t1,...]` with an explicit truth table. `#` starts a
//! comment.

use super::{GateOp, Layer, ReversibleCircuit, ReversibleGate};
use crate::{Error, Result};

pub fn serialize(circuit: &ReversibleCircuit) -> String {
    let mut out = format!(
        "width {} result {} depth {}\n",
        circuit.width(),
        circuit.result_wire(),
        circuit.depth()
    );
    for (li, layer) in circuit.layers().iter().enumerate() {
        for op in &layer.ops {
            let wires: Vec<String> = op.wires.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("{li} {} {}\n", op.gate, wires.join(",")));
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
}

fn parse_gate(tok: &str, line: usize) -> Result<ReversibleGate> {
    match tok {
        "NOT" => Ok(ReversibleGate::not()),
        "CNOT" => Ok(ReversibleGate::cnot()),
        "TOFFOLI" => Ok(ReversibleGate::toffoli()),
        "MAJ3" => Ok(ReversibleGate::maj3()),
        _ => {
            let body = tok
                .strip_prefix("PERM[")
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| Error::parse(line, format!("unknown gate '{tok}'")))?;
            let table = body
                .split(',')
                .map(|t| parse_usize(t.trim(), line, "table entry"))
                .collect::<Result<Vec<_>>>()?;
            // Non-bijective tables are kept so validation can report them.
            ReversibleGate::perm_unchecked(table).map_err(|e| Error::parse(line, e.to_string()))
        }
    }
}

pub fn parse(text: &str) -> Result<ReversibleCircuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing 'width N result R' header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (width, result, depth) = match toks.as_slice() {
        ["width", w, "result", r] => (
            parse_usize(w, hline, "width")?,
            parse_usize(r, hline, "result wire")?,
            None,
        ),
        ["width", w, "result", r, "depth", d] => (
            parse_usize(w, hline, "width")?,
            parse_usize(r, hline, "result wire")?,
            Some(parse_usize(d, hline, "depth")?),
        ),
        _ => return Err(Error::parse(hline, "expected 'width N result R [depth D]'")),
    };

    let mut layers: Vec<Layer> = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [layer, gate, wires] = toks.as_slice() else {
            return Err(Error::parse(ln, "expected '<layer> <gate> <wires>'"));
        };
        let layer = parse_usize(layer, ln, "layer index")?;
        let gate = parse_gate(gate, ln)?;
        let wires = wires
            .split(',')
            .map(|t| parse_usize(t, ln, "wire index"))
            .collect::<Result<Vec<_>>>()?;
        if layer >= layers.len() {
            layers.resize(layer + 1, Layer::default());
        }
        layers[layer].ops.push(GateOp::new(gate, wires));
    }
    if let Some(d) = depth {
        if d < layers.len() {
            return Err(Error::parse(
                hline,
                format!("declared depth {d} but gates use {} layers", layers.len()),
            ));
        }
        layers.resize(d, Layer::default());
    }
    Ok(ReversibleCircuit::from_layers(width, layers, result))
}
