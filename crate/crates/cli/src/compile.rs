use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qtrans_core::graph::circuit_weighted_graph;
use qtrans_core::mapping::Layout;
use qtrans_core::metrics::circuit_cost;
use qtrans_core::resource::{ResourceDb, SubQpu, Vqpu};
use qtrans_core::selector::{select, Preference, SelectionRequest};
use qtrans_core::standardize::standardize;
use qtrans_core::transpiler::{preset_passflow, transpile, Backend, PassFlow, PassRegistry, PassReport, Status, TranspileError};
use qtrans_core::verify::{verify_program, VerificationResult};
use qtrans_core::{emit_qasm, parse_qasm, Circuit, InstrKind};

use crate::CliError;

/// Depth penalty used for the reported circuit cost.
pub const DEFAULT_PENALTY: f64 = 0.995;

fn yes() -> bool {
    true
}

fn level_two() -> u8 {
    2
}

fn penalty() -> f64 {
    DEFAULT_PENALTY
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompileTask {
    pub circuit: String,
    #[serde(default = "yes")]
    pub transpile: bool,
    #[serde(default)]
    pub qpu_name: Option<String>,
    #[serde(default)]
    pub qubits_list: Option<Vec<usize>>,
    #[serde(default = "level_two")]
    pub optimization_level: u8,
    #[serde(default)]
    pub passflow: Option<PassFlow>,
    #[serde(default)]
    pub vqpu_preferred: Preference,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "penalty")]
    pub cost_penalty: f64,
}

impl CompileTask {
    pub fn new(circuit: &str) -> Self {
        CompileTask {
            circuit: circuit.into(),
            transpile: true,
            qpu_name: None,
            qubits_list: None,
            optimization_level: 2,
            passflow: None,
            vqpu_preferred: Preference::Fidelity,
            seed: 0,
            cost_penalty: DEFAULT_PENALTY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub depth: usize,
    pub gate_count: usize,
    pub two_qubit_gates: usize,
    pub circuit_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileInfo {
    pub chip: String,
    /// Physical qubit behind each virtual qubit of the chosen device.
    pub vqpu_qubits: Vec<usize>,
    pub preference: Preference,
    pub exact_mapping: Option<Vec<usize>>,
    pub kernel: Option<f64>,
    pub initial_layout: Vec<usize>,
    pub final_layout: Vec<usize>,
    pub swaps: Option<u64>,
    pub report: PassReport,
    pub metrics: Metrics,
    pub verification: VerificationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileResult {
    /// Compiled program over the virtual device's qubits.
    pub compiled_qasm: String,
    /// The same program addressed by physical chip qubits.
    pub physical_qasm: String,
    /// Physical qubit -> classical bit.
    pub qubits_to_cbits: BTreeMap<usize, usize>,
    pub compiled_info: CompileInfo,
}

fn user<E: std::fmt::Display>(e: E) -> CliError {
    CliError::User(e.to_string())
}

fn transpile_error(e: TranspileError) -> CliError {
    match e {
        TranspileError::Pass { .. } => CliError::Internal(e.to_string()),
        _ => user(e),
    }
}

fn chip_backend<'a>(db: &'a ResourceDb, name: &str) -> Result<&'a Backend, CliError> {
    db.chips.get(name).map(|r| &r.qpu.info).ok_or_else(|| CliError::User(format!("unknown chip '{name}'")))
}

/// Target for verification-only runs: the named chip, else the online
/// chip with the most active qubits.
fn verification_target<'a>(db: &'a ResourceDb, task: &CompileTask) -> Result<&'a Backend, CliError> {
    if let Some(name) = &task.qpu_name {
        return chip_backend(db, name);
    }
    db.chips
        .values()
        .filter(|r| r.qpu.info.status == Status::Online)
        .max_by(|a, b| a.qpu.active_qubits().len().cmp(&b.qpu.active_qubits().len()).then(b.qpu.name().cmp(a.qpu.name())))
        .map(|r| &r.qpu.info)
        .ok_or_else(|| CliError::User("no online chip registered".into()))
}

fn pinned_vqpu(db: &ResourceDb, task: &CompileTask, pins: &[usize], n: usize) -> Result<Vqpu, CliError> {
    let name = task.qpu_name.as_deref().ok_or_else(|| CliError::User("qubits_list requires qpu_name".into()))?;
    let rec = db.chips.get(name).ok_or_else(|| CliError::User(format!("unknown chip '{name}'")))?;
    if pins.len() != n {
        return Err(CliError::User(format!("qubits_list has {} qubits but the circuit needs {n}", pins.len())));
    }
    let mut sorted = pins.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pins.len() {
        return Err(CliError::User("qubits_list contains duplicates".into()));
    }
    let active = rec.qpu.active_qubits();
    if let Some(q) = pins.iter().find(|q| active.binary_search(q).is_err()) {
        return Err(CliError::User(format!("qubit {q} is not an active qubit of '{name}'")));
    }
    if !rec.qpu.graph.is_connected_subset(&sorted) {
        return Err(CliError::User("qubits_list does not form a connected region".into()));
    }
    Ok(Vqpu::from_sub(&SubQpu::new(&rec.qpu.graph, sorted, None), &rec.qpu))
}

/// Rewrites a circuit over virtual qubits into chip coordinates.
fn to_physical(c: &Circuit, vqpu: &Vqpu, chip_qubits: usize) -> Circuit {
    let mut out = c.clone();
    out.qregs = vec![("q".into(), chip_qubits)];
    for i in &mut out.instructions {
        for q in &mut i.qubits {
            *q = vqpu.v2p[*q];
        }
    }
    out
}

fn qubits_to_cbits(c: &Circuit) -> BTreeMap<usize, usize> {
    c.instructions.iter().filter(|i| i.kind == InstrKind::Measure).map(|i| (i.qubits[0], i.clbits[0])).collect()
}

fn metrics(c: &Circuit, b: &Backend, k: f64) -> Metrics {
    Metrics {
        depth: c.depth(),
        gate_count: c.gate_count(),
        two_qubit_gates: c.two_qubit_gate_count(),
        circuit_cost: circuit_cost(c, b, k).ok(),
    }
}

pub fn compile_task(db: &ResourceDb, task: &CompileTask) -> Result<CompileResult, CliError> {
    let parsed = parse_qasm(&task.circuit).map_err(user)?;
    let text = |c: &Circuit| emit_qasm(c).map_err(user);

    if !task.transpile {
        let c = parsed;
        let target = verification_target(db, task)?;
        let v = verify_program(&c, target);
        if !v.ok {
            return Err(CliError::Verification(v));
        }
        let qasm = text(&c)?;
        return Ok(CompileResult {
            physical_qasm: qasm.clone(),
            compiled_qasm: qasm,
            qubits_to_cbits: qubits_to_cbits(&c),
            compiled_info: CompileInfo {
                chip: target.name.clone(),
                vqpu_qubits: (0..c.num_qubits()).collect(),
                preference: task.vqpu_preferred,
                exact_mapping: None,
                kernel: None,
                initial_layout: (0..c.num_qubits()).collect(),
                final_layout: (0..c.num_qubits()).collect(),
                swaps: None,
                report: PassReport::default(),
                metrics: metrics(&c, target, task.cost_penalty),
                verification: v,
            },
        });
    }

    let c = standardize(&parsed);
    if task.optimization_level > 3 {
        return Err(CliError::User(format!("optimization level {} outside 0..=3", task.optimization_level)));
    }
    if !c.instructions.iter().any(|i| i.is_gate() || i.kind == InstrKind::Measure) {
        let v = verify_program(&c, &Backend::new("none", c.num_qubits(), vec![], &[]));
        return Err(CliError::Verification(v));
    }
    let n = c.num_qubits();

    let (vqpu, exact, kernel) = match &task.qubits_list {
        Some(pins) => (pinned_vqpu(db, task, pins, n)?, None, None),
        None => {
            let mut req = SelectionRequest::new(n, task.vqpu_preferred);
            req.chip = task.qpu_name.clone();
            if task.vqpu_preferred == Preference::Structure {
                req.graph = Some(circuit_weighted_graph(&c));
            }
            let s = select(db, &req).map_err(user)?;
            (s.vqpu, s.mapping, s.kernel)
        }
    };
    let backend = vqpu.backend();
    let chip_qubits = chip_backend(db, &vqpu.chip)?.qubits_num;
    let initial = match &exact {
        Some(m) => Some(Layout::new(m.clone(), vqpu.num_qubits()).map_err(CliError::Internal)?),
        None => None,
    };

    let flow = match &task.passflow {
        Some(f) => f.clone(),
        None => preset_passflow(task.optimization_level).map_err(user)?,
    };
    let out = transpile(&c, &backend, &flow, task.seed, initial, &PassRegistry::default()).map_err(transpile_error)?;

    let v = verify_program(&out.circuit, &backend);
    if !v.ok {
        return Err(CliError::Verification(v));
    }
    let physical = to_physical(&out.circuit, &vqpu, chip_qubits);
    Ok(CompileResult {
        compiled_qasm: text(&out.circuit)?,
        physical_qasm: text(&physical)?,
        qubits_to_cbits: qubits_to_cbits(&physical),
        compiled_info: CompileInfo {
            chip: vqpu.chip.clone(),
            vqpu_qubits: vqpu.v2p.clone(),
            preference: task.vqpu_preferred,
            exact_mapping: exact,
            kernel,
            initial_layout: out.initial_layout.l2p().to_vec(),
            final_layout: out.final_layout.l2p().to_vec(),
            swaps: out.scratch.get("swaps").and_then(|v| v.as_u64()),
            metrics: metrics(&out.circuit, &backend, task.cost_penalty),
            report: out.report,
            verification: v,
        },
    })
}
