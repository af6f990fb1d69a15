//! Choosing a virtual device for a circuit.

pub mod iso;
pub mod wl;

pub use iso::{graph_isomorphic, subgraph_monomorphism};
pub use wl::{edge_similarity, wl_kernel, KernelConfig};

use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;
use crate::resource::{ResourceDb, Vqpu};
use crate::transpiler::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preference {
    #[default]
    Fidelity,
    Structure,
}

impl std::str::FromStr for Preference {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fidelity" | "fid" => Ok(Self::Fidelity),
            "structure" | "struc" => Ok(Self::Structure),
            _ => Err(format!("unknown preference '{s}'")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SelectionRequest {
    pub qubits: usize,
    /// Circuit interaction graph; required for structure-first selection.
    pub graph: Option<WeightedGraph>,
    pub preference: Preference,
    pub chip: Option<String>,
    pub kernel: KernelConfig,
}

impl SelectionRequest {
    pub fn new(qubits: usize, preference: Preference) -> Self {
        SelectionRequest { qubits, graph: None, preference, chip: None, kernel: KernelConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectError {
    #[error("no available device offers {0} connected qubits")]
    NoCapacity(usize),
    #[error("unknown chip '{0}'")]
    UnknownChip(String),
    #[error("chip '{0}' is offline")]
    Offline(String),
    #[error("invalid request: {0}")]
    Request(String),
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub vqpu: Vqpu,
    /// Circuit qubit -> virtual qubit, when the structures are isomorphic.
    pub mapping: Option<Vec<usize>>,
    pub kernel: Option<f64>,
}

fn candidates(db: &ResourceDb, req: &SelectionRequest) -> Result<Vec<Vqpu>, SelectError> {
    if req.qubits == 0 {
        return Err(SelectError::Request("qubit count must be at least 1".into()));
    }
    let chips: Vec<_> = match &req.chip {
        Some(name) => {
            let rec = db.chips.get(name).ok_or_else(|| SelectError::UnknownChip(name.clone()))?;
            if rec.qpu.info.status == Status::Offline {
                return Err(SelectError::Offline(name.clone()));
            }
            vec![rec]
        }
        None => db.chips.values().filter(|r| r.qpu.info.status == Status::Online).collect(),
    };
    let all: Vec<Vqpu> = chips.iter().flat_map(|r| r.vqpus_of_size(req.qubits)).collect();
    if all.is_empty() {
        return Err(SelectError::NoCapacity(req.qubits));
    }
    Ok(all)
}

/// Highest product of coupling fidelities among same-size VQPUs; ties by
/// average fidelity, then library order.
pub fn select_fidelity_first(db: &ResourceDb, req: &SelectionRequest) -> Result<Selection, SelectError> {
    let all = candidates(db, req)?;
    let mut best = &all[0];
    for v in &all[1..] {
        if v.product_fidelity > best.product_fidelity
            || (v.product_fidelity == best.product_fidelity && v.avg_fidelity > best.avg_fidelity)
        {
            best = v;
        }
    }
    Ok(Selection { vqpu: best.clone(), mapping: None, kernel: None })
}

/// First VQPU isomorphic to the circuit graph, else the most similar one by
/// WL kernel (ties by product fidelity).
pub fn select_structure_first(db: &ResourceDb, req: &SelectionRequest) -> Result<Selection, SelectError> {
    let g = req.graph.as_ref().ok_or_else(|| SelectError::Request("structure selection needs a circuit graph".into()))?;
    if g.num_nodes() != req.qubits {
        return Err(SelectError::Request("circuit graph size differs from the qubit count".into()));
    }
    let all = candidates(db, req)?;
    for v in &all {
        if let Some(m) = graph_isomorphic(g, &v.graph()) {
            return Ok(Selection { vqpu: v.clone(), mapping: Some(m), kernel: None });
        }
    }
    let gn = g.normalized();
    let mut best: Option<(f64, &Vqpu)> = None;
    for v in &all {
        let k = wl_kernel(&gn, &v.graph().normalized(), req.kernel).map_err(SelectError::Request)?;
        let better = match best {
            None => true,
            Some((bk, bv)) => {
                let tol = 1e-12 * bk.abs().max(1.0);
                k > bk + tol || ((k - bk).abs() <= tol && v.product_fidelity > bv.product_fidelity)
            }
        };
        if better {
            best = Some((k, v));
        }
    }
    let (k, v) = best.unwrap();
    Ok(Selection { vqpu: v.clone(), mapping: None, kernel: Some(k) })
}

pub fn select(db: &ResourceDb, req: &SelectionRequest) -> Result<Selection, SelectError> {
    match req.preference {
        Preference::Fidelity => select_fidelity_first(db, req),
        Preference::Structure => select_structure_first(db, req),
    }
}
