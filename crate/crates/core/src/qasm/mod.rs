//! OpenQASM 2.0 reading and writing.
//!
//! The gate table is built in (see [`crate::gate::GATES`]); `include
//! "qelib1.inc";` is accepted and ignored. Gate definitions, `opaque`,
//! `reset` and classical control are rejected.

mod emit;
mod lexer;
mod parse;

pub use emit::{emit_qasm, emit_qasm_with, EmitOptions};
pub use parse::parse_qasm;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown gate '{name}' at {line}:{col}")]
    UnknownGate { name: String, line: usize, col: usize },
    #[error("register '{name}' redeclared at {line}:{col}")]
    Redeclaration { name: String, line: usize, col: usize },
    #[error("undeclared register '{name}' at {line}:{col}")]
    UndeclaredRegister { name: String, line: usize, col: usize },
    #[error("index {index} out of range for register '{name}' (size {size}) at {line}:{col}")]
    OutOfRange {
        name: String,
        index: usize,
        size: usize,
        line: usize,
        col: usize,
    },
    #[error("gate '{name}' at {line}:{col}: {msg}")]
    Arity {
        name: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unsupported construct '{what}' at {line}:{col}")]
    Unsupported { what: String, line: usize, col: usize },
    #[error("unbound parameter '{0}'")]
    UnboundParameter(String),
}
