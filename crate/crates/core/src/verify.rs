//! Hardware constraint checks on a compiled program.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, InstrKind};
use crate::transpiler::Backend;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerificationResult {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationResult {
    fn add(&mut self, check: &str, message: String) {
        self.violations.push(Violation { check: check.into(), message });
    }
}

/// Runs every check; all of them are evaluated even after a failure.
pub fn verify_program(c: &Circuit, b: &Backend) -> VerificationResult {
    let mut r = VerificationResult::default();

    if c.num_qubits() > b.qubits_num {
        r.add("qubit_count", format!("circuit uses {} qubits, device offers {}", c.num_qubits(), b.qubits_num));
    }

    let graph = b.coupling_graph();
    for (k, i) in c.instructions.iter().enumerate().filter(|(_, i)| i.is_gate()) {
        match i.qubits.len() {
            2 if !graph.has_edge(i.qubits[0], i.qubits[1]) => r.add(
                "coupling",
                format!("instruction {k}: {} on ({}, {}) is not a device coupling", i.name, i.qubits[0], i.qubits[1]),
            ),
            n if n > 2 => r.add("coupling", format!("instruction {k}: {n}-qubit gate {} cannot run natively", i.name)),
            _ => {}
        }
    }

    if let Some(max) = b.max_gate_count {
        let n = c.gate_count();
        if n > max {
            r.add("gate_count", format!("{n} gates exceed the device limit of {max}"));
        }
    }

    if !c.instructions.iter().any(|i| matches!(i.kind, InstrKind::Gate | InstrKind::Measure)) {
        r.add("non_empty", "circuit has no operations".into());
    }

    r.ok = r.violations.is_empty();
    r
}

/// Gate names in `c` outside the backend basis, deduplicated in first-use order.
pub fn basis_violations(c: &Circuit, b: &Backend) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in c.instructions.iter().filter(|i| i.is_gate()) {
        if !b.supports(&i.name) && !out.contains(&i.name) {
            out.push(i.name.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn line3() -> Backend {
        Backend::new("line", 3, vec![(0, 1, 0.99), (1, 2, 0.98)], &[])
    }

    fn checks(r: &VerificationResult) -> Vec<&str> {
        r.violations.iter().map(|v| v.check.as_str()).collect()
    }

    #[test]
    fn each_check_fires() {
        let wide = parse_qasm("qreg q[5]; h q[4];").unwrap();
        assert_eq!(checks(&verify_program(&wide, &line3())), ["qubit_count"]);

        let far = parse_qasm("qreg q[3]; cx q[0],q[2]; ccx q[0],q[1],q[2];").unwrap();
        assert_eq!(checks(&verify_program(&far, &line3())), ["coupling", "coupling"]);

        let empty = parse_qasm("qreg q[3];").unwrap();
        assert_eq!(checks(&verify_program(&empty, &line3())), ["non_empty"]);

        let mut b = line3();
        b.max_gate_count = Some(1);
        let two = parse_qasm("qreg q[3]; cx q[1],q[0]; x q[2];").unwrap();
        assert_eq!(checks(&verify_program(&two, &b)), ["gate_count"]);
        assert!(verify_program(&two, &line3()).ok);
    }

    #[test]
    fn failures_do_not_short_circuit() {
        let mut b = line3();
        b.max_gate_count = Some(0);
        let c = parse_qasm("qreg q[4]; cx q[0],q[3];").unwrap();
        assert_eq!(checks(&verify_program(&c, &b)), ["qubit_count", "coupling", "gate_count"]);
    }
}
