//! Core of the qtrans compiler: circuit IR, OpenQASM 2.0 I/O, the pass
//! framework, mapping, chip resource virtualization and selection.

pub mod circuit;
pub mod dag;
pub mod equiv;
pub mod fixtures;
pub mod gate;
pub mod graph;
pub mod mapping;
pub mod metrics;
pub mod passes;
pub mod param;
pub mod qasm;
pub mod random;
pub mod resource;
pub mod selector;
pub mod sim;
pub mod standardize;
pub mod synthesis;
pub mod transpiler;
pub mod verify;

pub use circuit::{Circuit, InstrKind, Instruction};
pub use dag::CircuitDag;
pub use param::ParamExpr;
pub use qasm::{emit_qasm, parse_qasm, QasmError};
