use serde::{Deserialize, Serialize};

use super::qpu::Qpu;
use super::substructure::SubQpu;
use crate::graph::WeightedGraph;
use crate::transpiler::Backend;

/// A virtual device: a substructure renumbered from 0 in ascending
/// physical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vqpu {
    pub chip: String,
    /// `v2p[v]` is the physical qubit behind virtual qubit `v`.
    pub v2p: Vec<usize>,
    /// Couplings over virtual ids.
    pub coupling_list: Vec<(usize, usize, f64)>,
    pub single_qubit_fidelity: Vec<f64>,
    pub basis_gates: Vec<String>,
    pub avg_fidelity: f64,
    pub product_fidelity: f64,
}

impl Vqpu {
    pub fn from_sub(sub: &SubQpu, parent: &Qpu) -> Self {
        let v2p = sub.qubits.clone();
        let index = |p: usize| v2p.binary_search(&p).ok();
        let coupling_list = parent
            .graph
            .edges
            .iter()
            .filter_map(|(&(a, b), &f)| Some((index(a)?, index(b)?, f)))
            .collect();
        Vqpu {
            chip: parent.name().to_string(),
            single_qubit_fidelity: v2p.iter().map(|&p| parent.info.fidelity_1q(p)).collect(),
            coupling_list,
            basis_gates: parent.info.basis_gates.clone(),
            avg_fidelity: sub.avg_fidelity,
            product_fidelity: sub.product_fidelity,
            v2p,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.v2p.len()
    }

    /// Coupling graph over virtual ids; edge weight = fidelity.
    pub fn graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.num_qubits());
        for &(a, b, f) in &self.coupling_list {
            g.add_edge(a, b, f);
        }
        g
    }

    /// Backend view over virtual ids, as seen by the transpiler.
    pub fn backend(&self) -> Backend {
        let mut b = Backend::new(
            &format!("{}:{:?}", self.chip, self.v2p),
            self.num_qubits(),
            self.coupling_list.clone(),
            &[],
        );
        b.basis_gates = self.basis_gates.clone();
        b.single_qubit_fidelity = self.single_qubit_fidelity.iter().copied().enumerate().collect();
        b
    }
}

pub fn build_vqpus(subs: &[SubQpu], parent: &Qpu) -> Vec<Vqpu> {
    subs.iter().map(|s| Vqpu::from_sub(s, parent)).collect()
}
