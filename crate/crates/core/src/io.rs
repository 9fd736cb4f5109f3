//! Text formats: the native `revq` circuit format and an OpenQASM 3 export.
//!
//! A `revq` document is
//!
//! ```text
//! wires 3
//! wire 0 a0 data
//! wire 1 b0 data
//! wire 2 z carryout
//! ccx 0 1 2
//! cx 0 1
//! ```
//!
//! Gate lines are `x t`, `cx c t`, `ccx c1 c2 t` or `mcx c1 .. ck t` with
//! `k >= 3`. `#` starts a comment. Indices are decimal, fields are separated by
//! spaces, lines end in `\n`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, WireId, WireRole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    if let Some(tag) = c.provenance() {
        let _ = writeln!(out, "# provenance: {tag}");
    }
    let _ = writeln!(out, "wires {}", c.width());
    for (i, w) in c.wires().iter().enumerate() {
        let _ = writeln!(out, "wire {i} {} {}", w.label, w.role.as_str());
    }
    for g in c.gates() {
        let _ = writeln!(out, "{g}");
    }
    out
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or_else(|| err(1, "empty document"))?;
    let width = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["wires", k] => k.parse::<usize>().map_err(|_| err(line, format!("bad wire count `{k}`")))?,
        _ => return Err(err(line, "expected `wires <count>`")),
    };

    let mut specs = Vec::with_capacity(width);
    for expected in 0..width {
        let (line, text) = lines
            .next()
            .ok_or_else(|| err(line, format!("expected {width} wire lines, found {expected}")))?;
        match text.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["wire", idx, label, role] => {
                if idx.parse::<usize>().ok() != Some(expected) {
                    return Err(err(line, format!("expected wire index {expected}, found `{idx}`")));
                }
                let role: WireRole = role.parse().map_err(|e: CircuitError| err(line, e.to_string()))?;
                if specs.iter().any(|(l, _): &(String, WireRole)| l == label) {
                    return Err(err(line, CircuitError::DuplicateLabel(label.to_string()).to_string()));
                }
                specs.push((label.to_string(), role));
            }
            _ => return Err(err(line, "expected `wire <index> <label> <role>`")),
        }
    }
    let mut c = Circuit::new(specs).map_err(|e| err(line, e.to_string()))?;

    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let (op, args) = fields.split_first().expect("line is non-empty");
        let wires = args
            .iter()
            .map(|a| a.parse::<usize>().map(WireId).map_err(|_| err(line, format!("bad wire index `{a}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let arity_ok = match *op {
            "x" => wires.len() == 1,
            "cx" => wires.len() == 2,
            "ccx" => wires.len() == 3,
            "mcx" => wires.len() >= 4,
            other => return Err(err(line, format!("unknown gate `{other}`"))),
        };
        if !arity_ok {
            return Err(err(line, format!("wrong number of operands for `{op}`")));
        }
        let (target, controls) = wires.split_last().expect("arity checked");
        let gate = Gate::new(controls.iter().copied(), *target).map_err(|e| err(line, e.to_string()))?;
        c.push(gate).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(c)
}

/// OpenQASM 3 text: one `qubit[K] q;` register, standard gates for up to two
/// controls and `ctrl(k) @ x` beyond. `header` lines become leading comments.
pub fn export_qasm3(c: &Circuit, header: &[String]) -> String {
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    for line in header {
        let _ = writeln!(out, "// {line}");
    }
    if let Some(tag) = c.provenance() {
        let _ = writeln!(out, "// provenance: {tag}");
    }
    let _ = writeln!(out, "qubit[{}] q;", c.width());
    for g in c.gates() {
        let operands: Vec<String> = g.wires().map(|w| format!("q[{w}]")).collect();
        let operands = operands.join(", ");
        let _ = match g.kind() {
            GateKind::X => writeln!(out, "x {operands};"),
            GateKind::Cnot => writeln!(out, "cx {operands};"),
            GateKind::Toffoli => writeln!(out, "ccx {operands};"),
            GateKind::Mcx => writeln!(out, "ctrl({}) @ x {operands};", g.controls().len()),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_l2_polylog;

    fn toffoli_circuit() -> Circuit {
        let mut c = Circuit::new([("a", WireRole::Data), ("b", WireRole::Data), ("t", WireRole::Ancilla)]).unwrap();
        c.ccx(WireId(0), WireId(1), WireId(2)).unwrap();
        c
    }

    #[test]
    fn toffoli_round_trip() {
        let c = toffoli_circuit();
        let text = serialize(&c);
        assert_eq!(text, "wires 3\nwire 0 a data\nwire 1 b data\nwire 2 t ancilla\nccx 0 1 2\n");
        let back = parse(&text).unwrap();
        assert_eq!(back.wires(), c.wires());
        assert_eq!(back.gates(), c.gates());
    }

    #[test]
    fn polylog_document_shape() {
        let text = serialize(&build_l2_polylog(7));
        assert_eq!(text.lines().filter(|l| l.starts_with("wire ")).count(), 15);
        let gate_lines = text
            .lines()
            .filter(|l| l.starts_with("ccx ") || l.starts_with("mcx "))
            .count();
        assert_eq!(gate_lines, 11);
    }

    #[test]
    fn duplicate_control_is_rejected() {
        let e = parse("wires 2\nwire 0 a data\nwire 1 b data\nccx 0 0 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("twice"), "{e}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse("# header\n\nwires 1 # one wire\nwire 0 q data\nx 0 # flip\n").unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn malformed_lines_report_numbers() {
        assert_eq!(parse("").unwrap_err().line, 1);
        assert_eq!(parse("wire 2\n").unwrap_err().line, 1);
        assert_eq!(parse("wires 1\nwire 1 q data\n").unwrap_err().line, 2);
        assert_eq!(parse("wires 1\nwire 0 q gadget\n").unwrap_err().line, 2);
        assert_eq!(parse("wires 2\nwire 0 q data\nwire 1 r data\ncx 0\n").unwrap_err().line, 4);
        assert_eq!(parse("wires 2\nwire 0 q data\nwire 1 r data\nmcx 0 1\n").unwrap_err().line, 4);
        assert_eq!(parse("wires 2\nwire 0 q data\nwire 1 r data\nx 5\n").unwrap_err().line, 4);
        assert_eq!(parse("wires 2\nwire 0 q data\nwire 1 q data\n").unwrap_err().line, 3);
        assert_eq!(parse("wires 2\nwire 0 q data\n").unwrap_err().line, 1);
    }

    #[test]
    fn qasm_lines() {
        let mut c = Circuit::new((0..7).map(|i| (format!("w{i}"), WireRole::Data))).unwrap();
        c.x(WireId(0)).unwrap();
        c.ccx(WireId(0), WireId(1), WireId(2)).unwrap();
        c.append((1..6).map(WireId), WireId(6)).unwrap();
        c.set_provenance("Theorem 1");
        let q = export_qasm3(&c, &["config: test".into()]);
        assert!(q.starts_with("OPENQASM 3.0;"));
        assert!(q.contains("qubit[7] q;"));
        assert!(q.contains("x q[0];"));
        assert!(q.contains("ccx q[0], q[1], q[2];"));
        assert!(q.contains("ctrl(5) @ x q[1], q[2], q[3], q[4], q[5], q[6];"));
        assert!(q.contains("// config: test"));
        assert!(q.contains("// provenance: Theorem 1"));
    }
}
