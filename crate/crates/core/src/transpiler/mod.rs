//! Pass pipeline: backend and model, pass flows, presets and reports.

pub mod backend;
pub mod model;
pub mod pass;
pub mod report;

use std::time::Instant;

pub use backend::{Backend, BackendError, Status};
pub use model::Model;
pub use pass::{Pass, PassDescriptor, PassFlow, PassRegistry, TranspileError};
pub use report::{LayoutSummary, PassEntry, PassReport, ReportFormat};
use serde_json::json;

use crate::circuit::Circuit;
use crate::dag::CircuitDag;
use crate::mapping::{naive_embed, Layout};

/// Runs every pass of `flow` in order; each pass sees the model as left by
/// the previous one.
pub fn run_passflow(
    c: &Circuit,
    flow: &PassFlow,
    model: &mut Model,
    registry: &PassRegistry,
) -> Result<(Circuit, PassReport), TranspileError> {
    let passes = flow.passes.iter().map(|d| registry.build(d)).collect::<Result<Vec<_>, _>>()?;
    let mut report = PassReport::default();
    let mut current = c.clone();
    for pass in passes {
        let start = Instant::now();
        let dag = CircuitDag::from_circuit(&current);
        let out = pass
            .run(dag, model)
            .map_err(|cause| TranspileError::Pass { pass: pass.name().to_string(), cause })?
            .to_circuit();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        report.entries.push(PassEntry::new(pass.name(), ms, &current, &out));
        current = out;
    }
    report.layout = LayoutSummary {
        initial: model.initial_layout.as_ref().map(|l| l.l2p().to_vec()),
        final_: model.final_layout.as_ref().map(|l| l.l2p().to_vec()),
    };
    Ok((current, report))
}

/// Preset flows for optimization levels 0 to 3.
pub fn preset_passflow(level: u8) -> Result<PassFlow, TranspileError> {
    let d = PassDescriptor::new;
    let w = PassDescriptor::with;
    let tail = |p: &mut Vec<PassDescriptor>| {
        p.extend([d("unroll_to_basis"), d("cancel_inverses"), d("fuse_1q"), d("cancel_inverses"), d("substitute_params")]);
    };
    let passes = match level {
        0 => vec![d("unroll_to_2q"), d("unroll_to_basis")],
        1 => vec![
            d("unroll_to_2q"),
            w("sabre_layout", json!({"heuristic": "distance", "init": "random", "iterations": 0})),
            w("sabre_route", json!({"heuristic": "distance"})),
            d("unroll_to_basis"),
        ],
        2 | 3 => {
            let (iters, init) = if level == 2 { (1, "degree") } else { (3, "weight") };
            let mut p = vec![
                d("unroll_to_2q"),
                w("sabre_layout", json!({"heuristic": "mixture", "init": init, "iterations": iters})),
                w("sabre_route", json!({"heuristic": "mixture"})),
            ];
            tail(&mut p);
            p
        }
        _ => return Err(TranspileError::Level(level)),
    };
    Ok(PassFlow::new(passes))
}

/// Output of [`transpile`]: a circuit over the backend's physical qubits.
#[derive(Debug, Clone)]
pub struct Transpiled {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub report: PassReport,
    /// Scratch state left by the passes (swap counts, traces).
    pub scratch: std::collections::BTreeMap<String, serde_json::Value>,
}

/// Runs `flow` for `backend`. Flows without a routing pass are finished by
/// a naive embedding (given or trivial layout, shortest-path swaps) and a
/// final basis unroll, so the result always respects the coupling graph.
pub fn transpile(
    c: &Circuit,
    backend: &Backend,
    flow: &PassFlow,
    seed: u64,
    initial: Option<Layout>,
    registry: &PassRegistry,
) -> Result<Transpiled, TranspileError> {
    if c.num_qubits() > backend.qubits_num {
        return Err(TranspileError::Flow(format!(
            "circuit needs {} qubits but the device has {}",
            c.num_qubits(),
            backend.qubits_num
        )));
    }
    let mut model = Model::new(backend.clone()).with_seed(seed);
    model.initial_layout = initial;
    let (mut out, mut report) = run_passflow(c, flow, &mut model, registry)?;

    let final_layout = match model.final_layout.clone() {
        Some(l) => l,
        None => {
            let n = out.num_qubits();
            let start = match &model.initial_layout {
                Some(l) if l.num_logical() == n && l.num_physical() == backend.qubits_num => l.clone(),
                _ => Layout::trivial(n, backend.qubits_num),
            };
            let t = Instant::now();
            let (embedded, fin) = naive_embed(&out, model.coupling_graph(), &start)
                .map_err(|e| TranspileError::Pass { pass: "naive_embed".into(), cause: e.to_string() })?;
            report.entries.push(PassEntry::new("naive_embed", t.elapsed().as_secs_f64() * 1e3, &out, &embedded));
            let t = Instant::now();
            let unroll = registry.build(&PassDescriptor::new("unroll_to_basis"))?;
            let unrolled = unroll
                .run(CircuitDag::from_circuit(&embedded), &mut model)
                .map_err(|cause| TranspileError::Pass { pass: "unroll_to_basis".into(), cause })?
                .to_circuit();
            report.entries.push(PassEntry::new("unroll_to_basis", t.elapsed().as_secs_f64() * 1e3, &embedded, &unrolled));
            out = unrolled;
            model.initial_layout = Some(start);
            model.final_layout = Some(fin.clone());
            fin
        }
    };
    let initial_layout = model.initial_layout.clone().expect("set with the final layout");
    report.layout = LayoutSummary { initial: Some(initial_layout.l2p().to_vec()), final_: Some(final_layout.l2p().to_vec()) };
    Ok(Transpiled { circuit: out, initial_layout, final_layout, report, scratch: model.scratch })
}
