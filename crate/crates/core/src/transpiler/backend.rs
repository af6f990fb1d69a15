use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::CouplingGraph;

pub const DEFAULT_1Q_FIDELITY: f64 = 0.996;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    #[default]
    Online,
    Offline,
}

/// Hardware description seen by the transpiler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Backend {
    pub name: String,
    #[serde(default = "default_type")]
    pub backend_type: String,
    pub qubits_num: usize,
    /// `(q1, q2, fidelity)`; undirected.
    pub coupling_list: Vec<(usize, usize, f64)>,
    pub basis_gates: Vec<String>,
    /// Per-qubit single-qubit gate fidelity; missing qubits use the default.
    #[serde(default)]
    pub single_qubit_fidelity: BTreeMap<usize, f64>,
    #[serde(default)]
    pub max_gate_count: Option<usize>,
    #[serde(default)]
    pub status: Status,
    #[serde(default)]
    pub priority_qubits: Vec<usize>,
}

fn default_type() -> String {
    "superconducting".into()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BackendError {
    #[error("coupling ({0}, {1}) references a qubit outside 0..{2}")]
    QubitOutOfRange(usize, usize, usize),
    #[error("fidelity {0} outside [0, 1]")]
    Fidelity(f64),
    #[error("self-coupling on qubit {0}")]
    SelfLoop(usize),
}

impl Backend {
    pub fn new(name: &str, qubits_num: usize, coupling_list: Vec<(usize, usize, f64)>, basis: &[&str]) -> Self {
        Backend {
            name: name.into(),
            backend_type: default_type(),
            qubits_num,
            coupling_list,
            basis_gates: if basis.is_empty() {
                Self::default_basis()
            } else {
                basis.iter().map(|s| s.to_string()).collect()
            },
            single_qubit_fidelity: BTreeMap::new(),
            max_gate_count: None,
            status: Status::Online,
            priority_qubits: Vec::new(),
        }
    }

    /// Default basis used when a description omits one.
    pub fn default_basis() -> Vec<String> {
        ["cx", "rx", "ry", "rz"].iter().map(|s| s.to_string()).collect()
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        for &(a, b, f) in &self.coupling_list {
            if a >= self.qubits_num || b >= self.qubits_num {
                return Err(BackendError::QubitOutOfRange(a, b, self.qubits_num));
            }
            if a == b {
                return Err(BackendError::SelfLoop(a));
            }
            if !(0.0..=1.0).contains(&f) || !f.is_finite() {
                return Err(BackendError::Fidelity(f));
            }
        }
        for &f in self.single_qubit_fidelity.values() {
            if !(0.0..=1.0).contains(&f) || !f.is_finite() {
                return Err(BackendError::Fidelity(f));
            }
        }
        if !self.coupling_graph().is_connected() && self.qubits_num > 1 {
            log::warn!("backend {} has a disconnected coupling graph", self.name);
        }
        Ok(())
    }

    pub fn fidelity_1q(&self, q: usize) -> f64 {
        self.single_qubit_fidelity.get(&q).copied().unwrap_or(DEFAULT_1Q_FIDELITY)
    }

    pub fn average_1q_fidelity(&self) -> f64 {
        if self.qubits_num == 0 {
            return DEFAULT_1Q_FIDELITY;
        }
        (0..self.qubits_num).map(|q| self.fidelity_1q(q)).sum::<f64>() / self.qubits_num as f64
    }

    pub fn edge_fidelity(&self, a: usize, b: usize) -> Option<f64> {
        self.coupling_list
            .iter()
            .find(|&&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
            .map(|&(_, _, f)| f)
    }

    /// Coupling graph with 1q fidelities as node weights.
    pub fn coupling_graph(&self) -> CouplingGraph {
        let mut g = CouplingGraph::new(self.qubits_num);
        for &(a, b, f) in &self.coupling_list {
            g.add_edge(a, b, f);
        }
        for q in 0..self.qubits_num {
            g.node_weights[q] = Some(self.fidelity_1q(q));
        }
        g
    }

    pub fn supports(&self, gate: &str) -> bool {
        self.basis_gates.iter().any(|g| g == gate)
    }
}
