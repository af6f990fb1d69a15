//! Peephole optimizations: inverse-pair cancellation and single-qubit fusion.
//! Barriers and measurements split runs and are never crossed.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{InstrKind, Instruction};
use crate::dag::{CircuitDag, NodeId, Wire};
use crate::gate;
use crate::param::{canonical_angle, ParamExpr};
use crate::synthesis::synth_1q;

/// Rotations with a smaller magnitude are deleted.
pub const ANGLE_EPS: f64 = 1e-10;

const ROTATIONS: [&str; 3] = ["rx", "ry", "rz"];

fn symmetric(name: &str) -> bool {
    matches!(name, "cz" | "swap")
}

fn inverse_pair(a: &Instruction, b: &Instruction) -> bool {
    if a.kind != InstrKind::Gate || b.kind != InstrKind::Gate || a.name != b.name || !gate::is_self_inverse(&a.name) {
        return false;
    }
    if a.qubits == b.qubits {
        return true;
    }
    symmetric(&a.name) && a.qubits.len() == 2 && a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0]
}

/// Removes adjacent self-inverse pairs until none is left.
pub fn cancel_inverses(dag: &mut CircuitDag) -> usize {
    let mut removed = 0;
    loop {
        let mut changed = false;
        for id in dag.topological_ops() {
            if !dag.contains(id) {
                continue;
            }
            let node = dag.node(id);
            let Some(op) = node.op() else { continue };
            if !gate::is_self_inverse(&op.name) || op.kind != InstrKind::Gate {
                continue;
            }
            let Some(next) = node.succs[0] else { continue };
            if !node.succs.iter().all(|s| *s == Some(next)) {
                continue;
            }
            let nn = dag.node(next);
            match nn.op() {
                Some(b) if nn.wires.len() == node.wires.len() && inverse_pair(op, b) => {}
                _ => continue,
            }
            dag.remove_op(id);
            dag.remove_op(next);
            removed += 2;
            changed = true;
        }
        if !changed {
            return removed;
        }
    }
}

fn rotation_angle(i: &Instruction) -> Option<f64> {
    if ROTATIONS.contains(&i.name.as_str()) {
        i.params[0].as_f64()
    } else {
        None
    }
}

/// Merges adjacent same-axis rotations by angle addition, canonicalizes
/// literal angles and drops negligible rotations.
fn merge_same_axis(run: &[Instruction]) -> Vec<Instruction> {
    let mut out: Vec<Instruction> = Vec::with_capacity(run.len());
    for i in run {
        if let Some(top) = out.last_mut() {
            if top.name == i.name && ROTATIONS.contains(&i.name.as_str()) {
                top.params[0] = top.params[0].plus(&i.params[0]).simplify();
                continue;
            }
        }
        out.push(i.clone());
    }
    out.into_iter()
        .filter_map(|mut i| {
            if let Some(a) = rotation_angle(&i) {
                let a = canonical_angle(a);
                if a.abs() < ANGLE_EPS {
                    return None;
                }
                i.params[0] = ParamExpr::Num(a);
            }
            Some(i)
        })
        .collect()
}

fn product(seg: &[Instruction]) -> DMatrix<Complex64> {
    let mut m = DMatrix::identity(2, 2);
    for i in seg {
        let u = gate::matrix(&i.name, &i.literal_params().unwrap()).expect("known 1q gate");
        m = u * m;
    }
    m
}

/// Rewrites one run of single-qubit gates on qubit `q`.
pub fn optimize_run(run: &[Instruction], q: usize) -> Vec<Instruction> {
    let merged = merge_same_axis(run);
    let mut out = Vec::with_capacity(merged.len());
    let mut seg: Vec<Instruction> = Vec::new();
    let flush = |seg: &mut Vec<Instruction>, out: &mut Vec<Instruction>| {
        if seg.is_empty() {
            return;
        }
        let fused = synth_1q(&product(seg), q);
        let foreign = seg.iter().any(|i| !ROTATIONS.contains(&i.name.as_str()));
        if fused.len() < seg.len() || foreign {
            out.extend(fused);
        } else {
            out.append(seg);
        }
        seg.clear();
    };
    for i in merged {
        if i.is_parameterized() || gate::matrix(&i.name, &i.literal_params().unwrap_or_default()).is_none() {
            flush(&mut seg, &mut out);
            out.push(i);
        } else {
            seg.push(i);
        }
    }
    flush(&mut seg, &mut out);
    out
}

fn is_1q_gate(dag: &CircuitDag, id: NodeId) -> bool {
    dag.node(id).op().is_some_and(|i| i.is_gate() && i.qubits.len() == 1)
}

/// Fuses maximal single-qubit runs on every wire. Returns true if the DAG
/// changed.
pub fn fuse_1q(dag: &mut CircuitDag) -> bool {
    let mut changed = false;
    for q in 0..dag.num_qubits() {
        let path = dag.wire_path(Wire::Qubit(q));
        let mut runs: Vec<Vec<NodeId>> = Vec::new();
        let mut cur = Vec::new();
        for id in path {
            if is_1q_gate(dag, id) {
                cur.push(id);
            } else if !cur.is_empty() {
                runs.push(std::mem::take(&mut cur));
            }
        }
        for run in runs {
            let instrs: Vec<Instruction> = run.iter().map(|&id| dag.node(id).op().unwrap().clone()).collect();
            let new = optimize_run(&instrs, q);
            if new == instrs {
                continue;
            }
            changed = true;
            for &id in &run[1..] {
                dag.remove_op(id);
            }
            if new.is_empty() {
                dag.remove_op(run[0]);
            } else {
                dag.substitute(run[0], new);
            }
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn run_cancel(src: &str) -> Vec<String> {
        let mut d = CircuitDag::from_circuit(&parse_qasm(src).unwrap());
        cancel_inverses(&mut d);
        d.to_circuit().instructions.into_iter().map(|i| i.name).collect()
    }

    #[test]
    fn cancellation_cases() {
        assert!(run_cancel("qreg q[2]; cx q[0],q[1]; cx q[0],q[1];").is_empty());
        assert_eq!(run_cancel("qreg q[2]; cx q[0],q[1]; cx q[1],q[0];").len(), 2);
        assert_eq!(run_cancel("qreg q[1]; h q[0]; h q[0]; h q[0];"), ["h"]);
        assert_eq!(run_cancel("qreg q[2]; h q[0]; barrier q[0],q[1]; h q[0];").len(), 3);
        assert!(run_cancel("qreg q[2]; cz q[0],q[1]; cz q[1],q[0];").is_empty());
        // nested pairs collapse through the fixpoint
        assert!(run_cancel("qreg q[2]; cx q[0],q[1]; h q[1]; h q[1]; cx q[0],q[1];").is_empty());
    }

    #[test]
    fn literal_and_symbolic_merges() {
        let rz = |p: ParamExpr| Instruction::gate("rz", &[0], vec![p]);
        let out = optimize_run(&[rz(ParamExpr::Num(0.25)), rz(ParamExpr::Num(0.5))], 0);
        assert_eq!(out, vec![Instruction::gate_f("rz", &[0], &[0.75])]);
        let out = optimize_run(&[rz(ParamExpr::sym("theta")), rz(ParamExpr::Num(std::f64::consts::PI))], 0);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].params[0].symbols(), vec!["theta".to_string()]);
        assert!(optimize_run(&[rz(ParamExpr::Num(0.3)), rz(ParamExpr::Num(-0.3))], 0).is_empty());
    }

    #[test]
    fn fused_run_is_short() {
        let mut d = CircuitDag::from_circuit(&parse_qasm("qreg q[1]; h q[0]; x q[0]; h q[0]; rx(0.2) q[0];").unwrap());
        assert!(fuse_1q(&mut d));
        assert!(d.num_ops() <= 3);
        assert!(!fuse_1q(&mut d));
    }
}
