//! Directed acyclic graph form of a circuit.
//!
//! Every qubit and clbit is a wire with an input and an output sentinel.
//! Operation nodes sit on the wires they touch; each wire forms a single
//! path from its input sentinel to its output sentinel.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::circuit::{Circuit, Instruction};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Qubit(usize),
    Clbit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    In(Wire),
    Out(Wire),
    Op(Instruction),
}

#[derive(Debug, Clone)]
pub struct DagNode {
    pub kind: NodeKind,
    /// Wires in operand order (qubits then clbits).
    pub wires: Vec<Wire>,
    /// `preds[i]` is the previous node on `wires[i]`.
    pub preds: Vec<Option<NodeId>>,
    /// `succs[i]` is the next node on `wires[i]`.
    pub succs: Vec<Option<NodeId>>,
    /// Lexicographic position key, used to keep a stable linear order.
    order: Vec<u32>,
}

impl DagNode {
    pub fn op(&self) -> Option<&Instruction> {
        match &self.kind {
            NodeKind::Op(i) => Some(i),
            _ => None,
        }
    }

    fn slot(&self, w: Wire) -> usize {
        self.wires.iter().position(|&x| x == w).expect("wire not on node")
    }
}

#[derive(Debug, Clone)]
pub struct CircuitDag {
    pub qregs: Vec<(String, usize)>,
    pub cregs: Vec<(String, usize)>,
    pub metadata: BTreeMap<String, String>,
    nodes: Vec<Option<DagNode>>,
    inputs: BTreeMap<Wire, NodeId>,
    outputs: BTreeMap<Wire, NodeId>,
    next_order: u32,
}

fn instr_wires(i: &Instruction) -> Vec<Wire> {
    i.qubits
        .iter()
        .map(|&q| Wire::Qubit(q))
        .chain(i.clbits.iter().map(|&c| Wire::Clbit(c)))
        .collect()
}

impl CircuitDag {
    /// Builds the DAG; per-wire order follows instruction order.
    pub fn from_circuit(c: &Circuit) -> Self {
        let mut dag = CircuitDag {
            qregs: c.qregs.clone(),
            cregs: c.cregs.clone(),
            metadata: c.metadata.clone(),
            nodes: Vec::new(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            next_order: 0,
        };
        let wires: Vec<Wire> = (0..c.num_qubits())
            .map(Wire::Qubit)
            .chain((0..c.num_clbits()).map(Wire::Clbit))
            .collect();
        let mut last: BTreeMap<Wire, NodeId> = BTreeMap::new();
        for &w in &wires {
            let id = dag.push_node(NodeKind::In(w), vec![w], vec![0]);
            dag.inputs.insert(w, id);
            last.insert(w, id);
        }
        for instr in &c.instructions {
            let order = vec![dag.next_order + 1];
            let id = dag.push_node(NodeKind::Op(instr.clone()), instr_wires(instr), order);
            dag.next_order += 1;
            let ws = dag.node(id).wires.clone();
            for (slot, w) in ws.into_iter().enumerate() {
                let prev = last[&w];
                dag.link(prev, id, w, slot);
                last.insert(w, id);
            }
        }
        for &w in &wires {
            let id = dag.push_node(NodeKind::Out(w), vec![w], vec![u32::MAX]);
            dag.outputs.insert(w, id);
            let prev = last[&w];
            dag.link(prev, id, w, 0);
        }
        dag
    }

    fn push_node(&mut self, kind: NodeKind, wires: Vec<Wire>, order: Vec<u32>) -> NodeId {
        let n = wires.len();
        self.nodes.push(Some(DagNode { kind, wires, preds: vec![None; n], succs: vec![None; n], order }));
        self.nodes.len() - 1
    }

    fn link(&mut self, from: NodeId, to: NodeId, w: Wire, to_slot: usize) {
        let fs = self.node(from).slot(w);
        self.node_mut(from).succs[fs] = Some(to);
        self.node_mut(to).preds[to_slot] = Some(from);
    }

    pub fn node(&self, id: NodeId) -> &DagNode {
        self.nodes[id].as_ref().expect("removed node")
    }

    fn node_mut(&mut self, id: NodeId) -> &mut DagNode {
        self.nodes[id].as_mut().expect("removed node")
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.get(id).is_some_and(|n| n.is_some())
    }

    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|(_, n)| n).sum()
    }

    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|(_, n)| n).sum()
    }

    pub fn input_node(&self, w: Wire) -> Option<NodeId> {
        self.inputs.get(&w).copied()
    }

    pub fn output_node(&self, w: Wire) -> Option<NodeId> {
        self.outputs.get(&w).copied()
    }

    /// Ids of all live nodes, sentinels included.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.is_some()).map(|(i, _)| i)
    }

    pub fn num_ops(&self) -> usize {
        self.node_ids().filter(|&i| self.node(i).op().is_some()).count()
    }

    /// Distinct successor nodes.
    pub fn successors(&self, id: NodeId) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.node(id).succs.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn predecessors(&self, id: NodeId) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.node(id).preds.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Next node on wire `w` after `id`.
    pub fn next_on_wire(&self, id: NodeId, w: Wire) -> Option<NodeId> {
        let n = self.node(id);
        n.succs[n.slot(w)]
    }

    /// Operation nodes in a topological order that follows the original
    /// instruction order wherever dependencies allow.
    pub fn topological_ops(&self) -> Vec<NodeId> {
        let mut indeg: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        for id in self.node_ids() {
            let d = self.predecessors(id).len();
            indeg.insert(id, d);
            if d == 0 {
                heap.push(Reverse((self.node(id).order.clone(), id)));
            }
        }
        let mut out = Vec::new();
        while let Some(Reverse((_, id))) = heap.pop() {
            if self.node(id).op().is_some() {
                out.push(id);
            }
            for s in self.successors(id) {
                let d = indeg.get_mut(&s).unwrap();
                *d -= 1;
                if *d == 0 {
                    heap.push(Reverse((self.node(s).order.clone(), s)));
                }
            }
        }
        out
    }

    pub fn to_circuit(&self) -> Circuit {
        Circuit {
            qregs: self.qregs.clone(),
            cregs: self.cregs.clone(),
            instructions: self
                .topological_ops()
                .into_iter()
                .map(|id| self.node(id).op().unwrap().clone())
                .collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// Removes an operation node and reconnects its wires.
    pub fn remove_op(&mut self, id: NodeId) {
        let node = self.nodes[id].take().expect("removed node");
        assert!(node.op().is_some(), "cannot remove a sentinel");
        for (slot, &w) in node.wires.iter().enumerate() {
            let p = node.preds[slot].expect("op without predecessor");
            let s = node.succs[slot].expect("op without successor");
            let ps = self.node(p).slot(w);
            self.node_mut(p).succs[ps] = Some(s);
            let ss = self.node(s).slot(w);
            self.node_mut(s).preds[ss] = Some(p);
        }
    }

    /// Replaces an operation node by a sequence of instructions acting on a
    /// subset of its wires. Returns the ids of the new nodes.
    pub fn substitute(&mut self, id: NodeId, replacement: Vec<Instruction>) -> Vec<NodeId> {
        let node = self.node(id).clone();
        let mut frontier: BTreeMap<Wire, NodeId> = BTreeMap::new();
        for (slot, &w) in node.wires.iter().enumerate() {
            frontier.insert(w, node.preds[slot].unwrap());
        }
        // detach the old node
        self.nodes[id] = None;
        for (slot, &w) in node.wires.iter().enumerate() {
            let p = node.preds[slot].unwrap();
            let ps = self.node(p).slot(w);
            self.node_mut(p).succs[ps] = None;
        }
        let mut new_ids = Vec::with_capacity(replacement.len());
        for (k, instr) in replacement.into_iter().enumerate() {
            let ws = instr_wires(&instr);
            for w in &ws {
                assert!(frontier.contains_key(w), "replacement touches a foreign wire {w:?}");
            }
            let mut order = node.order.clone();
            order.push(k as u32);
            let nid = self.push_node(NodeKind::Op(instr), ws.clone(), order);
            for (slot, w) in ws.into_iter().enumerate() {
                let prev = frontier[&w];
                self.link(prev, nid, w, slot);
                frontier.insert(w, nid);
            }
            new_ids.push(nid);
        }
        for (slot, &w) in node.wires.iter().enumerate() {
            let s = node.succs[slot].unwrap();
            let prev = frontier[&w];
            let ss = self.node(s).slot(w);
            let ps = self.node(prev).slot(w);
            self.node_mut(prev).succs[ps] = Some(s);
            self.node_mut(s).preds[ss] = Some(prev);
        }
        new_ids
    }

    /// Replaces the instruction stored in an operation node. The new
    /// instruction must act on exactly the same wires.
    pub fn replace_op(&mut self, id: NodeId, instr: Instruction) {
        assert_eq!(instr_wires(&instr), self.node(id).wires, "wire mismatch");
        self.node_mut(id).kind = NodeKind::Op(instr);
    }

    /// True if a directed path leads from `a` to `b`.
    pub fn has_path(&self, a: NodeId, b: NodeId) -> bool {
        let mut stack = vec![a];
        let mut seen = std::collections::BTreeSet::new();
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            if seen.insert(x) {
                stack.extend(self.successors(x));
            }
        }
        false
    }

    /// Nodes on wire `w`, from its input sentinel to its output sentinel.
    pub fn wire_path(&self, w: Wire) -> Vec<NodeId> {
        let mut path = Vec::new();
        let mut cur = self.input_node(w);
        while let Some(id) = cur {
            path.push(id);
            cur = self.next_on_wire(id, w);
        }
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    #[test]
    fn empty_circuit_has_only_sentinels() {
        let c = parse_qasm("qreg q[2]; creg c[1];").unwrap();
        let d = CircuitDag::from_circuit(&c);
        assert_eq!(d.node_ids().count(), 6);
        assert_eq!(d.num_ops(), 0);
        assert_eq!(d.to_circuit(), c);
    }

    #[test]
    fn disjoint_gates_are_unordered() {
        let c = parse_qasm("qreg q[2]; h q[0]; x q[1];").unwrap();
        let d = CircuitDag::from_circuit(&c);
        let ops = d.topological_ops();
        assert!(!d.has_path(ops[0], ops[1]) && !d.has_path(ops[1], ops[0]));
    }

    #[test]
    fn substitute_and_remove_keep_wire_paths() {
        let c = parse_qasm("qreg q[2]; h q[0]; swap q[0],q[1]; x q[1];").unwrap();
        let mut d = CircuitDag::from_circuit(&c);
        let swap = d.topological_ops()[1];
        let new = d.substitute(
            swap,
            vec![
                Instruction::gate_f("cx", &[0, 1], &[]),
                Instruction::gate_f("cx", &[1, 0], &[]),
                Instruction::gate_f("cx", &[0, 1], &[]),
            ],
        );
        let names: Vec<String> = d.to_circuit().instructions.into_iter().map(|i| i.name).collect();
        assert_eq!(names, ["h", "cx", "cx", "cx", "x"]);
        d.remove_op(new[1]);
        assert_eq!(d.wire_path(Wire::Qubit(0)).len(), 5);
        assert_eq!(d.to_circuit().instructions.len(), 4);
    }
}
