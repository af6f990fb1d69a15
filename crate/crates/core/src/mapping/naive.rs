//! Placement without search: start from a given layout and, for every
//! two-qubit gate on non-adjacent qubits, walk the first operand along a
//! shortest path.

use super::layout::Layout;
use super::matrices::shortest_path;
use super::sabre::RoutingError;
use crate::circuit::{Circuit, Instruction};
use crate::graph::CouplingGraph;

/// Returns the physical circuit (width = number of device qubits) and the
/// final layout.
pub fn naive_embed(c: &Circuit, coupling: &CouplingGraph, start: &Layout) -> Result<(Circuit, Layout), RoutingError> {
    let n = coupling.num_nodes();
    if start.num_logical() != c.num_qubits() || start.num_physical() != n {
        return Err(RoutingError::LayoutSize(start.num_logical(), c.num_qubits()));
    }
    let mut layout = start.clone();
    let mut out = Circuit { qregs: vec![("q".into(), n)], ..c.clone() };
    out.instructions.clear();
    for instr in &c.instructions {
        if instr.is_gate() && instr.qubits.len() > 2 {
            return Err(RoutingError::WideGate(instr.name.clone()));
        }
        if instr.is_gate() && instr.qubits.len() == 2 {
            let (a, b) = (layout.phys(instr.qubits[0]), layout.phys(instr.qubits[1]));
            if !coupling.has_edge(a, b) {
                let path = shortest_path(coupling, a, b).ok_or(RoutingError::Disconnected(instr.qubits[0], instr.qubits[1]))?;
                for w in path[..path.len() - 1].windows(2) {
                    out.push(Instruction::gate("swap", &[w[0], w[1]], vec![]));
                    layout.swap_physical(w[0], w[1]);
                }
            }
        }
        let qubits = instr.qubits.iter().map(|&q| layout.phys(q)).collect();
        out.push(Instruction { qubits, ..instr.clone() });
    }
    Ok((out, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::equivalent_up_to_layout;
    use crate::qasm::parse_qasm;

    #[test]
    fn line_walk() {
        let g = CouplingGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let c = parse_qasm("qreg q[3]; creg c[1]; h q[0]; cx q[0],q[2]; measure q[0] -> c[0];").unwrap();
        let start = Layout::trivial(3, 4);
        let (out, fin) = naive_embed(&c, &g, &start).unwrap();
        assert_eq!(out.instructions.iter().filter(|i| i.name == "swap").count(), 1);
        assert_eq!(fin.l2p(), &[1, 0, 2]);
        assert!(equivalent_up_to_layout(&c, &out, &start, &fin, 1e-9).unwrap());
    }
}
