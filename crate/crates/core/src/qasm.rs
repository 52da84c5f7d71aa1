//! OpenQASM 2.0 export, plus a reader for the subset the exporter emits.
//!
//! Angle mapping (turns → `qelib1.inc` radians):
//!
//! | gate        | QASM                        |
//! |-------------|-----------------------------|
//! | `Rz(t)`     | `u1(2πt)`                   |
//! | `Ry(t)`     | `ry(4πt)` (qelib `ry` is half-angle) |
//! | `Crz(t)`    | `cu1(2πt)`                  |
//! | `Cphase(t)` | `cphase(2πt)`, defined in the header via `cu1` |
//! | `Cry(t)`    | `cry(4πt)`                  |

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::units::{radians_to_turns, turns_to_radians};

pub const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
const CPHASE_DEF: &str = "gate cphase(lambda) a,b { cu1(lambda) a,b; }\n";

/// 17 significant digits.
fn angle(radians: f64) -> String {
    format!("{radians:.16e}")
}

fn ops(qubits: &[usize]) -> String {
    qubits.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(",")
}

pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    if let Some((index, gate)) = circuit.gates().iter().enumerate().find(|(_, g)| g.is_composite()) {
        return Err(Error::Export { index, gate: gate.to_string() });
    }
    let mut out = String::from(HEADER);
    if circuit.gates().iter().any(|g| matches!(g.kind(), GateKind::Cphase(_))) {
        out.push_str(CPHASE_DEF);
    }
    writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    for gate in circuit.gates() {
        let q = ops(gate.qubits());
        let line = match gate.kind() {
            GateKind::H => format!("h {q};"),
            GateKind::X => format!("x {q};"),
            GateKind::Rz(t) => format!("u1({}) {q};", angle(turns_to_radians(*t))),
            GateKind::Ry(t) => format!("ry({}) {q};", angle(2.0 * turns_to_radians(*t))),
            GateKind::Cnot => format!("cx {q};"),
            GateKind::Toffoli => format!("ccx {q};"),
            GateKind::Crz(t) => format!("cu1({}) {q};", angle(turns_to_radians(*t))),
            GateKind::Cphase(t) => format!("cphase({}) {q};", angle(turns_to_radians(*t))),
            GateKind::Swap => format!("swap {q};"),
            GateKind::Cry(t) => format!("cry({}) {q};", angle(2.0 * turns_to_radians(*t))),
            GateKind::Diagonal(_) | GateKind::Unitary(_) => unreachable!("composites rejected above"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn parse_operand(s: &str) -> Result<usize> {
    let s = s.trim();
    s.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad operand '{s}'")))
}

/// Reads back text produced by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty()
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
            || line.starts_with("gate ")
        {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}: '{line}'", lineno + 1));
        let stmt = line.strip_suffix(';').ok_or_else(|| err("missing ';'"))?;
        if let Some(rest) = stmt.strip_prefix("qreg") {
            let n = parse_operand(rest.trim())?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let circ = circuit.as_mut().ok_or_else(|| err("gate before qreg"))?;
        let (head, operands) = stmt.split_once(' ').ok_or_else(|| err("no operands"))?;
        let qubits = operands.split(',').map(parse_operand).collect::<Result<Vec<_>>>()?;
        let (name, arg) = match head.split_once('(') {
            Some((name, rest)) => {
                let value = rest
                    .strip_suffix(')')
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| err("bad angle"))?;
                (name, Some(value))
            }
            None => (head, None),
        };
        let need = |a: Option<f64>| a.ok_or_else(|| err("missing angle"));
        let q = |i: usize| qubits.get(i).copied().ok_or_else(|| err("too few operands"));
        let gate = match name {
            "h" => Gate::h(q(0)?),
            "x" => Gate::x(q(0)?),
            "u1" => Gate::rz(q(0)?, radians_to_turns(need(arg)?)),
            "ry" => Gate::ry(q(0)?, radians_to_turns(need(arg)?) / 2.0),
            "cx" => Gate::cnot(q(0)?, q(1)?),
            "ccx" => Gate::toffoli(q(0)?, q(1)?, q(2)?),
            "cu1" => Gate::crz(q(0)?, q(1)?, radians_to_turns(need(arg)?)),
            "cphase" => Gate::cphase(q(0)?, q(1)?, radians_to_turns(need(arg)?)),
            "swap" => Gate::swap(q(0)?, q(1)?),
            "cry" => Gate::cry(q(0)?, q(1)?, radians_to_turns(need(arg)?) / 2.0),
            other => return Err(err(&format!("unsupported gate '{other}'"))),
        };
        circ.push(gate)?;
    }
    circuit.ok_or_else(|| Error::Parse("no qreg declaration".into()))
}
