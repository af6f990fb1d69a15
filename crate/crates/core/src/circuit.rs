//! Linear circuit representation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gate;
use crate::param::ParamExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrKind {
    Gate,
    Barrier,
    Measure,
}

/// One circuit instruction. Qubits and clbits are flat indices into the
/// concatenation of the circuit's registers, in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instruction {
    pub kind: InstrKind,
    pub name: String,
    pub qubits: Vec<usize>,
    pub clbits: Vec<usize>,
    pub params: Vec<ParamExpr>,
}

impl Instruction {
    pub fn gate(name: &str, qubits: &[usize], params: Vec<ParamExpr>) -> Self {
        Instruction {
            kind: InstrKind::Gate,
            name: name.to_string(),
            qubits: qubits.to_vec(),
            clbits: Vec::new(),
            params,
        }
    }

    /// Gate with literal parameters.
    pub fn gate_f(name: &str, qubits: &[usize], params: &[f64]) -> Self {
        Self::gate(name, qubits, params.iter().map(|&p| ParamExpr::Num(p)).collect())
    }

    pub fn barrier(qubits: &[usize]) -> Self {
        Instruction {
            kind: InstrKind::Barrier,
            name: "barrier".into(),
            qubits: qubits.to_vec(),
            clbits: Vec::new(),
            params: Vec::new(),
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Instruction {
            kind: InstrKind::Measure,
            name: "measure".into(),
            qubits: vec![qubit],
            clbits: vec![clbit],
            params: Vec::new(),
        }
    }

    pub fn is_gate(&self) -> bool {
        self.kind == InstrKind::Gate
    }

    /// Literal parameter values, or `None` if any parameter is symbolic.
    pub fn literal_params(&self) -> Option<Vec<f64>> {
        self.params.iter().map(ParamExpr::eval).collect()
    }

    pub fn is_parameterized(&self) -> bool {
        self.params.iter().any(|p| !p.is_literal())
    }
}

/// An ordered instruction list over named quantum and classical registers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub qregs: Vec<(String, usize)>,
    pub cregs: Vec<(String, usize)>,
    pub instructions: Vec<Instruction>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl Circuit {
    /// Circuit with a single `q` register and, if `num_clbits > 0`, a `c` register.
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        let mut c = Circuit {
            qregs: vec![("q".into(), num_qubits)],
            ..Default::default()
        };
        if num_clbits > 0 {
            c.cregs.push(("c".into(), num_clbits));
        }
        c
    }

    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|(_, n)| n).sum()
    }

    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|(_, n)| n).sum()
    }

    pub fn push(&mut self, instr: Instruction) {
        self.instructions.push(instr);
    }

    pub fn gate_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.is_gate()).count()
    }

    /// Gate counts keyed by arity (barriers and measures excluded).
    pub fn gate_counts_by_arity(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for i in self.instructions.iter().filter(|i| i.is_gate()) {
            *m.entry(i.qubits.len()).or_insert(0) += 1;
        }
        m
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| i.is_gate() && i.qubits.len() == 2)
            .count()
    }

    /// Gate-layer depth under as-soon-as-possible scheduling. Barriers and
    /// measures do not contribute.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits()];
        let mut depth = 0;
        for instr in self.instructions.iter().filter(|i| i.is_gate()) {
            let l = instr.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &instr.qubits {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Qubits touched by any gate or measure, ascending.
    pub fn used_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_qubits()];
        for i in &self.instructions {
            if i.kind != InstrKind::Barrier {
                for &q in &i.qubits {
                    used[q] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(q, _)| q).collect()
    }

    /// `(register name, index)` for a flat qubit index.
    pub fn qubit_label(&self, q: usize) -> Option<(&str, usize)> {
        label(&self.qregs, q)
    }

    pub fn clbit_label(&self, c: usize) -> Option<(&str, usize)> {
        label(&self.cregs, c)
    }

    /// Checks operand bounds and gate arities.
    pub fn validate(&self) -> Result<(), String> {
        let nq = self.num_qubits();
        let nc = self.num_clbits();
        for (k, i) in self.instructions.iter().enumerate() {
            if let Some(&q) = i.qubits.iter().find(|&&q| q >= nq) {
                return Err(format!("instruction {k} ({}): qubit {q} out of range", i.name));
            }
            if let Some(&c) = i.clbits.iter().find(|&&c| c >= nc) {
                return Err(format!("instruction {k} ({}): clbit {c} out of range", i.name));
            }
            let mut qs = i.qubits.clone();
            qs.sort_unstable();
            qs.dedup();
            if qs.len() != i.qubits.len() {
                return Err(format!("instruction {k} ({}): repeated qubit operand", i.name));
            }
            match i.kind {
                InstrKind::Gate => {
                    let spec = gate::lookup(&i.name)
                        .ok_or_else(|| format!("instruction {k}: unknown gate {}", i.name))?;
                    if spec.num_qubits != i.qubits.len() || spec.num_params != i.params.len() {
                        return Err(format!("instruction {k}: arity mismatch for {}", i.name));
                    }
                }
                InstrKind::Measure => {
                    if i.qubits.len() != 1 || i.clbits.len() != 1 {
                        return Err(format!("instruction {k}: measure needs one qubit and one clbit"));
                    }
                }
                InstrKind::Barrier => {}
            }
        }
        Ok(())
    }
}

fn label(regs: &[(String, usize)], mut idx: usize) -> Option<(&str, usize)> {
    for (name, size) in regs {
        if idx < *size {
            return Some((name.as_str(), idx));
        }
        idx -= size;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_ignores_barriers_and_measures() {
        let mut c = Circuit::new(2, 2);
        c.push(Instruction::gate_f("h", &[0], &[]));
        c.push(Instruction::barrier(&[0, 1]));
        c.push(Instruction::gate_f("cx", &[0, 1], &[]));
        c.push(Instruction::measure(0, 0));
        c.push(Instruction::gate_f("x", &[1], &[]));
        assert_eq!(c.depth(), 3);
        assert_eq!(c.gate_counts_by_arity().get(&1), Some(&2));
    }

    #[test]
    fn labels_follow_declaration_order() {
        let c = Circuit {
            qregs: vec![("a".into(), 2), ("b".into(), 1)],
            ..Default::default()
        };
        assert_eq!(c.qubit_label(2), Some(("b", 0)));
        assert_eq!(c.qubit_label(3), None);
    }
}
