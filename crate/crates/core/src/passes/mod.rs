//! Built-in transpiler passes.

pub mod optimize;
pub mod unroll;

use std::collections::BTreeMap;

use serde_json::Value;

use crate::circuit::Instruction;
use crate::dag::CircuitDag;
use crate::graph::circuit_weighted_graph;
use crate::mapping::{initial_layout, route, sabre_layout, Heuristic, InitStrategy, Layout, RouteOptions, SabreConfig};
use crate::transpiler::{Model, Pass, PassRegistry};

pub use unroll::Basis;

/// Scratch key holding parameter bindings (`name -> number`).
pub const BINDINGS_KEY: &str = "bindings";
/// Scratch key: when `true`, routing records each heuristic decision.
pub const TRACE_KEY: &str = "trace_routing";
/// Scratch key where routing decisions are stored.
pub const TRACE_OUT_KEY: &str = "routing_trace";
/// Scratch key for the number of inserted swaps.
pub const SWAPS_KEY: &str = "swaps";

fn rewrite_each<F>(mut dag: CircuitDag, f: F) -> Result<CircuitDag, String>
where
    F: Fn(&Instruction) -> Result<Vec<Instruction>, String>,
{
    for id in dag.topological_ops() {
        let instr = dag.node(id).op().unwrap().clone();
        let out = f(&instr)?;
        if out.len() != 1 || out[0] != instr {
            dag.substitute(id, out);
        }
    }
    Ok(dag)
}

fn str_param<'a>(p: &'a Value, key: &str, default: &'a str) -> Result<&'a str, String> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(Value::String(s)) => Ok(s),
        Some(v) => Err(format!("'{key}' must be a string, got {v}")),
    }
}

fn usize_param(p: &Value, key: &str, default: usize) -> Result<usize, String> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| format!("'{key}' must be a non-negative integer")),
    }
}

fn sabre_config(p: &Value) -> Result<SabreConfig, String> {
    match p.get("config") {
        None | Some(Value::Null) => Ok(SabreConfig::default()),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| e.to_string()),
    }
}

pub struct UnrollTo2Q;

impl Pass for UnrollTo2Q {
    fn name(&self) -> &str {
        "unroll_to_2q"
    }
    fn run(&self, dag: CircuitDag, _: &mut Model) -> Result<CircuitDag, String> {
        rewrite_each(dag, unroll::unroll_to_2q)
    }
}

pub struct UnrollToBasis {
    pub basis: Option<Vec<String>>,
}

impl Pass for UnrollToBasis {
    fn name(&self) -> &str {
        "unroll_to_basis"
    }
    fn run(&self, dag: CircuitDag, model: &mut Model) -> Result<CircuitDag, String> {
        let names = self.basis.clone().unwrap_or_else(|| model.backend.basis_gates.clone());
        let basis = Basis::new(&names)?;
        rewrite_each(dag, |i| unroll::unroll_to_basis(i, &basis))
    }
}

pub struct SabreLayoutPass {
    pub heuristic: Heuristic,
    pub init: InitStrategy,
    pub iterations: usize,
    pub config: SabreConfig,
}

impl Pass for SabreLayoutPass {
    fn name(&self) -> &str {
        "sabre_layout"
    }
    fn run(&self, dag: CircuitDag, model: &mut Model) -> Result<CircuitDag, String> {
        let c = dag.to_circuit();
        let n = c.num_qubits();
        let start = match &model.initial_layout {
            Some(l) if l.num_logical() == n && l.num_physical() == model.backend.qubits_num => l.clone(),
            _ => initial_layout(&circuit_weighted_graph(&c), model.coupling_graph(), self.init, model.seed)?,
        };
        let ctx = model.routing_context();
        let l = sabre_layout(&c, &ctx, &start, self.heuristic, self.iterations, self.config, model.seed).map_err(|e| e.to_string())?;
        model.initial_layout = Some(l);
        Ok(dag)
    }
}

pub struct SabreRoutePass {
    pub heuristic: Heuristic,
    pub config: SabreConfig,
}

impl Pass for SabreRoutePass {
    fn name(&self) -> &str {
        "sabre_route"
    }
    fn run(&self, dag: CircuitDag, model: &mut Model) -> Result<CircuitDag, String> {
        let c = dag.to_circuit();
        let n = c.num_qubits();
        let nphys = model.backend.qubits_num;
        if n > nphys {
            return Err(format!("circuit needs {n} qubits but backend has {nphys}"));
        }
        let layout = match &model.initial_layout {
            Some(l) if l.num_logical() == n => l.clone(),
            _ => Layout::trivial(n, nphys),
        };
        let trace = model.scratch.get(TRACE_KEY).and_then(Value::as_bool).unwrap_or(false);
        let ctx = model.routing_context();
        let r = route(&c, &ctx, &layout, self.heuristic, self.config, model.seed, RouteOptions { emit: true, trace })
            .map_err(|e| e.to_string())?;
        if trace {
            let steps: Vec<Value> = r
                .trace
                .iter()
                .map(|t| serde_json::json!({"s_d": t.s_d, "chosen": t.chosen, "candidates": t.candidates}))
                .collect();
            let all = model.scratch.entry(TRACE_OUT_KEY.to_string()).or_insert_with(|| Value::Array(Vec::new()));
            if let Value::Array(v) = all {
                v.extend(steps);
            }
        }
        model.scratch.insert(SWAPS_KEY.into(), Value::from(r.num_swaps));
        model.initial_layout = Some(r.initial_layout);
        model.final_layout = Some(r.final_layout);
        Ok(CircuitDag::from_circuit(&r.circuit.expect("emitted")))
    }
}

pub struct CancelInverses;

impl Pass for CancelInverses {
    fn name(&self) -> &str {
        "cancel_inverses"
    }
    fn run(&self, mut dag: CircuitDag, _: &mut Model) -> Result<CircuitDag, String> {
        optimize::cancel_inverses(&mut dag);
        Ok(dag)
    }
}

pub struct Fuse1Q;

impl Pass for Fuse1Q {
    fn name(&self) -> &str {
        "fuse_1q"
    }
    fn run(&self, mut dag: CircuitDag, _: &mut Model) -> Result<CircuitDag, String> {
        optimize::fuse_1q(&mut dag);
        Ok(dag)
    }
}

/// Replaces bound symbols by their values. Bindings come from the pass
/// parameters, or else from the model scratch.
pub struct SubstituteParams {
    pub bindings: Option<BTreeMap<String, f64>>,
}

fn parse_bindings(v: &Value) -> Result<BTreeMap<String, f64>, String> {
    serde_json::from_value(v.clone()).map_err(|e| format!("bindings: {e}"))
}

impl Pass for SubstituteParams {
    fn name(&self) -> &str {
        "substitute_params"
    }
    fn run(&self, dag: CircuitDag, model: &mut Model) -> Result<CircuitDag, String> {
        let b = match &self.bindings {
            Some(b) => b.clone(),
            None => match model.scratch.get(BINDINGS_KEY) {
                Some(v) => parse_bindings(v)?,
                None => BTreeMap::new(),
            },
        };
        if b.is_empty() {
            return Ok(dag);
        }
        rewrite_each(dag, |i| {
            let mut i = i.clone();
            i.params = i.params.iter().map(|p| p.bind(&b)).collect();
            Ok(vec![i])
        })
    }
}

pub fn register_builtin(r: &mut PassRegistry) {
    r.register("unroll_to_2q", |_| Ok(Box::new(UnrollTo2Q)));
    r.register("unroll_to_basis", |p| {
        let basis = match p.get("basis") {
            None | Some(Value::Null) => None,
            Some(v) => Some(serde_json::from_value::<Vec<String>>(v.clone()).map_err(|e| e.to_string())?),
        };
        Ok(Box::new(UnrollToBasis { basis }))
    });
    r.register("sabre_layout", |p| {
        Ok(Box::new(SabreLayoutPass {
            heuristic: str_param(p, "heuristic", "mixture")?.parse()?,
            init: str_param(p, "init", "degree")?.parse()?,
            iterations: usize_param(p, "iterations", 1)?,
            config: sabre_config(p)?,
        }))
    });
    r.register("sabre_route", |p| {
        Ok(Box::new(SabreRoutePass { heuristic: str_param(p, "heuristic", "mixture")?.parse()?, config: sabre_config(p)? }))
    });
    r.register("cancel_inverses", |_| Ok(Box::new(CancelInverses)));
    r.register("fuse_1q", |_| Ok(Box::new(Fuse1Q)));
    r.register("substitute_params", |p| {
        let bindings = match p.get("bindings") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_bindings(v)?),
        };
        Ok(Box::new(SubstituteParams { bindings }))
    });
}
