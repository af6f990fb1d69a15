//! Command-line front end: chip registration, compilation and the
//! benchmark harness.

pub mod bench;
pub mod compile;

pub use bench::{parse_strategy, read_report, run_bench, write_report, BenchRow, BenchStrategy};
pub use compile::{compile_task, CompileInfo, CompileResult, CompileTask, Metrics};

use qtrans_core::verify::VerificationResult;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    User(String),
    #[error("verification failed: {}", summary(.0))]
    Verification(VerificationResult),
    #[error("internal error: {0}")]
    Internal(String),
}

fn summary(v: &VerificationResult) -> String {
    v.violations.iter().map(|x| format!("[{}] {}", x.check, x.message)).collect::<Vec<_>>().join("; ")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}
