use crate::graph::CouplingGraph;
use crate::transpiler::{Backend, BackendError};

#[derive(Debug, thiserror::Error)]
pub enum ChipError {
    #[error("chip document does not match the schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("invalid chip name '{0}'")]
    Name(String),
}

/// A physical chip: the registered description plus its coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Qpu {
    pub info: Backend,
    pub graph: CouplingGraph,
}

pub fn valid_chip_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) && !name.starts_with('.')
}

impl Qpu {
    pub fn new(mut info: Backend) -> Result<Self, ChipError> {
        if info.qubits_num == 0 {
            return Err(ChipError::Schema("qubits_num must be positive".into()));
        }
        if info.basis_gates.is_empty() {
            info.basis_gates = Backend::default_basis();
        }
        info.validate()?;
        for &q in info.priority_qubits.iter().chain(info.single_qubit_fidelity.keys()) {
            if q >= info.qubits_num {
                return Err(ChipError::Schema(format!("qubit {q} outside 0..{}", info.qubits_num)));
            }
        }
        let graph = info.coupling_graph();
        Ok(Qpu { info, graph })
    }

    /// Parses a chip document (JSON) and renames it to `name`.
    pub fn from_json(name: &str, text: &str) -> Result<Self, ChipError> {
        if !valid_chip_name(name) {
            return Err(ChipError::Name(name.into()));
        }
        let mut info: Backend = serde_json::from_str(text).map_err(|e| ChipError::Schema(e.to_string()))?;
        info.name = name.to_string();
        Self::new(info)
    }

    pub fn name(&self) -> &str {
        &self.info.name
    }

    /// Qubits with at least one coupling; every qubit of a 1-qubit chip.
    pub fn active_qubits(&self) -> Vec<usize> {
        if self.info.qubits_num == 1 {
            return vec![0];
        }
        let deg = self.graph.degrees();
        (0..self.info.qubits_num).filter(|&q| deg[q] > 0).collect()
    }
}
