//! Qubit layout and SWAP routing.

pub mod layout;
pub mod matrices;
pub mod naive;
pub mod sabre;

pub use layout::{initial_layout, sorted_nodes, InitStrategy, Layout};
pub use naive::naive_embed;
pub use matrices::{shortest_path, DistanceMatrix, FidelityMatrix, UNREACHABLE};
pub use sabre::{route, sabre_layout, Heuristic, RouteOptions, RouteResult, RoutingContext, RoutingError, SabreConfig, TraceStep};
