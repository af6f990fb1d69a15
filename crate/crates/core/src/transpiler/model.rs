use std::cell::OnceCell;
use std::collections::BTreeMap;

use super::backend::Backend;
use crate::mapping::{DistanceMatrix, FidelityMatrix, Layout, RoutingContext};
use crate::graph::CouplingGraph;

/// Shared state threaded through a pass flow.
#[derive(Debug, Clone)]
pub struct Model {
    pub backend: Backend,
    pub initial_layout: Option<Layout>,
    pub final_layout: Option<Layout>,
    /// Free-form data passed between passes.
    pub scratch: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    coupling: OnceCell<CouplingGraph>,
    distance: OnceCell<DistanceMatrix>,
    fidelity: OnceCell<FidelityMatrix>,
}

impl Model {
    pub fn new(backend: Backend) -> Self {
        Model {
            backend,
            initial_layout: None,
            final_layout: None,
            scratch: BTreeMap::new(),
            seed: 0,
            coupling: OnceCell::new(),
            distance: OnceCell::new(),
            fidelity: OnceCell::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn coupling_graph(&self) -> &CouplingGraph {
        self.coupling.get_or_init(|| self.backend.coupling_graph())
    }

    pub fn distance_matrix(&self) -> &DistanceMatrix {
        self.distance.get_or_init(|| DistanceMatrix::new(self.coupling_graph()))
    }

    pub fn fidelity_matrix(&self) -> &FidelityMatrix {
        self.fidelity.get_or_init(|| FidelityMatrix::new(self.coupling_graph()))
    }

    pub fn routing_context(&self) -> RoutingContext<'_> {
        RoutingContext { coupling: self.coupling_graph(), dist: self.distance_matrix(), fid: self.fidelity_matrix() }
    }
}
