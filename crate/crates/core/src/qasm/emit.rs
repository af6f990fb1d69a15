use std::fmt::Write;

use super::QasmError;
use crate::circuit::{Circuit, InstrKind, Instruction};

#[derive(Debug, Clone, Copy, Default)]
pub struct EmitOptions {
    /// Print unbound symbolic parameters instead of failing.
    pub allow_symbolic: bool,
}

/// Canonical OpenQASM 2.0 text: header, qregs, cregs, then one instruction
/// per line in IR order.
pub fn emit_qasm(c: &Circuit) -> Result<String, QasmError> {
    emit_qasm_with(c, EmitOptions::default())
}

pub fn emit_qasm_with(c: &Circuit, opts: EmitOptions) -> Result<String, QasmError> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for (name, size) in &c.qregs {
        let _ = writeln!(out, "qreg {name}[{size}];");
    }
    for (name, size) in &c.cregs {
        let _ = writeln!(out, "creg {name}[{size}];");
    }
    for instr in &c.instructions {
        out.push_str(&emit_instruction(c, instr, opts)?);
        out.push('\n');
    }
    Ok(out)
}

fn qubit(c: &Circuit, q: usize) -> String {
    match c.qubit_label(q) {
        Some((r, i)) => format!("{r}[{i}]"),
        None => format!("q[{q}]"),
    }
}

fn emit_instruction(c: &Circuit, instr: &Instruction, opts: EmitOptions) -> Result<String, QasmError> {
    let qubits: Vec<String> = instr.qubits.iter().map(|&q| qubit(c, q)).collect();
    Ok(match instr.kind {
        InstrKind::Barrier => format!("barrier {};", qubits.join(",")),
        InstrKind::Measure => {
            let cl = match c.clbit_label(instr.clbits[0]) {
                Some((r, i)) => format!("{r}[{i}]"),
                None => format!("c[{}]", instr.clbits[0]),
            };
            format!("measure {} -> {cl};", qubits[0])
        }
        InstrKind::Gate => {
            if !opts.allow_symbolic {
                if let Some(p) = instr.params.iter().find(|p| p.eval().is_none()) {
                    let sym = p.symbols().into_iter().next().unwrap_or_default();
                    return Err(QasmError::UnboundParameter(sym));
                }
            }
            if instr.params.is_empty() {
                format!("{} {};", instr.name, qubits.join(","))
            } else {
                let ps: Vec<String> = instr.params.iter().map(|p| p.to_string()).collect();
                format!("{}({}) {};", instr.name, ps.join(","), qubits.join(","))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::ParamExpr;
    use crate::qasm::parse_qasm;

    #[test]
    fn empty_circuit_is_header_and_declaration() {
        let c = Circuit::new(3, 0);
        assert_eq!(emit_qasm(&c).unwrap(), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n");
    }

    #[test]
    fn symbolic_needs_flag() {
        let mut c = Circuit::new(1, 0);
        c.push(Instruction::gate("rz", &[0], vec![ParamExpr::sym("theta")]));
        assert_eq!(emit_qasm(&c), Err(QasmError::UnboundParameter("theta".into())));
        let text = emit_qasm_with(&c, EmitOptions { allow_symbolic: true }).unwrap();
        assert!(text.contains("rz(theta) q[0];"));
        assert_eq!(parse_qasm(&text).unwrap(), c);
    }

    #[test]
    fn negative_and_compound_params_round_trip() {
        let mut c = Circuit::new(2, 2);
        let e = ParamExpr::sym("a").plus(&ParamExpr::Num(-0.25)).scaled(0.5);
        c.push(Instruction::gate("rzz", &[0, 1], vec![e]));
        c.push(Instruction::gate_f("u3", &[1], &[-1.5, 0.0, 1e-20]));
        c.push(Instruction::barrier(&[0, 1]));
        c.push(Instruction::measure(1, 0));
        let text = emit_qasm_with(&c, EmitOptions { allow_symbolic: true }).unwrap();
        assert_eq!(parse_qasm(&text).unwrap(), c);
    }
}
