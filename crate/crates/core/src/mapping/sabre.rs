//! SWAP-based routing with lookahead and decay, plus the reverse-traversal
//! layout search built on top of it.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::layout::Layout;
use super::matrices::{shortest_path, DistanceMatrix, FidelityMatrix, UNREACHABLE};
use crate::circuit::{Circuit, InstrKind, Instruction};
use crate::graph::{circuit_weighted_graph, CouplingGraph};

/// Swap selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    /// Minimize the decayed distance score.
    Distance,
    /// Maximize the decayed fidelity score.
    Fidelity,
    /// Distance first; fidelity breaks ties among the distance minimizers.
    Mixture,
}

impl std::str::FromStr for Heuristic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distance" | "H_D" | "HD" => Ok(Self::Distance),
            "fidelity" | "H_Fi" | "HFi" => Ok(Self::Fidelity),
            "mixture" | "H_M" | "HM" => Ok(Self::Mixture),
            _ => Err(format!("unknown heuristic '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SabreConfig {
    pub extended_size: usize,
    pub extended_weight: f64,
    pub decay_delta: f64,
    pub decay_reset: usize,
}

impl Default for SabreConfig {
    fn default() -> Self {
        SabreConfig { extended_size: 20, extended_weight: 0.5, decay_delta: 0.001, decay_reset: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoutingError {
    #[error("gate '{0}' acts on more than two qubits")]
    WideGate(String),
    #[error("logical qubits {0} and {1} sit in disconnected device regions")]
    Disconnected(usize, usize),
    #[error("layout covers {0} qubits but the circuit has {1}")]
    LayoutSize(usize, usize),
}

/// Device data needed by the router.
pub struct RoutingContext<'a> {
    pub coupling: &'a CouplingGraph,
    pub dist: &'a DistanceMatrix,
    pub fid: &'a FidelityMatrix,
}

/// One heuristic swap decision.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub candidates: Vec<(usize, usize)>,
    /// Candidates minimizing the distance score.
    pub s_d: Vec<(usize, usize)>,
    pub chosen: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct RouteResult {
    /// Routed circuit over physical qubits; `None` when not requested.
    pub circuit: Option<Circuit>,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub num_swaps: usize,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RouteOptions {
    pub emit: bool,
    pub trace: bool,
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, set: &[T]) -> T {
    set[rng.gen_range(0..set.len())]
}

fn min_set(items: &[(usize, usize)], scores: &[f64]) -> Vec<(usize, usize)> {
    let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * best.abs().max(1.0);
    items.iter().zip(scores).filter(|(_, &s)| s <= best + tol).map(|(&i, _)| i).collect()
}

fn max_set(items: &[(usize, usize)], scores: &[f64]) -> Vec<(usize, usize)> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * best.abs().max(1.0);
    items.iter().zip(scores).filter(|(_, &s)| s >= best - tol).map(|(&i, _)| i).collect()
}

struct Deps {
    preds: Vec<usize>,
    succs: Vec<Vec<usize>>,
}

fn dependencies(c: &Circuit) -> Deps {
    let n = c.instructions.len();
    let mut last_q = vec![usize::MAX; c.num_qubits()];
    let mut last_c = vec![usize::MAX; c.num_clbits()];
    let mut preds = vec![0; n];
    let mut succs = vec![Vec::new(); n];
    for (i, instr) in c.instructions.iter().enumerate() {
        let mut ps: Vec<usize> = instr
            .qubits
            .iter()
            .map(|&q| last_q[q])
            .chain(instr.clbits.iter().map(|&b| last_c[b]))
            .filter(|&p| p != usize::MAX)
            .collect();
        ps.sort_unstable();
        ps.dedup();
        preds[i] = ps.len();
        for p in ps {
            succs[p].push(i);
        }
        instr.qubits.iter().for_each(|&q| last_q[q] = i);
        instr.clbits.iter().for_each(|&b| last_c[b] = i);
    }
    Deps { preds, succs }
}

fn is_2q(i: &Instruction) -> bool {
    i.kind == InstrKind::Gate && i.qubits.len() == 2
}

struct Router<'a, 'c> {
    ctx: &'a RoutingContext<'c>,
    c: &'a Circuit,
    h: Heuristic,
    cfg: SabreConfig,
    layout: Layout,
    decay: Vec<f64>,
    rng: ChaCha8Rng,
    out: Option<Circuit>,
    num_swaps: usize,
    trace: Option<Vec<TraceStep>>,
}

impl Router<'_, '_> {
    fn emit(&mut self, instr: &Instruction) {
        if let Some(out) = self.out.as_mut() {
            let mut m = instr.clone();
            m.qubits = instr.qubits.iter().map(|&q| self.layout.phys(q)).collect();
            out.push(m);
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        if let Some(out) = self.out.as_mut() {
            out.push(Instruction::gate_f("swap", &[a, b], &[]));
        }
        self.layout.swap_physical(a, b);
        self.num_swaps += 1;
    }

    fn extended_set(&self, front: &[usize], deps: &Deps, remaining: &[usize]) -> Vec<usize> {
        let mut ext = Vec::new();
        let mut pending: std::collections::BTreeMap<usize, usize> = Default::default();
        let mut queue: VecDeque<usize> = front.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &s in &deps.succs[x] {
                let left = pending.entry(s).or_insert(remaining[s]);
                *left -= 1;
                if *left == 0 {
                    if is_2q(&self.c.instructions[s]) {
                        ext.push(s);
                        if ext.len() >= self.cfg.extended_size {
                            return ext;
                        }
                    }
                    queue.push_back(s);
                }
            }
        }
        ext
    }

    fn scores(&self, front: &[usize], ext: &[usize], cands: &[(usize, usize)]) -> (Vec<f64>, Vec<f64>) {
        let pairs = |ids: &[usize]| -> Vec<(usize, usize)> {
            ids.iter()
                .map(|&i| {
                    let q = &self.c.instructions[i].qubits;
                    (self.layout.phys(q[0]), self.layout.phys(q[1]))
                })
                .collect()
        };
        let fp = pairs(front);
        let ep = pairs(ext);
        let w = self.cfg.extended_weight;
        let mut hd = Vec::with_capacity(cands.len());
        let mut hf = Vec::with_capacity(cands.len());
        for &(s1, s2) in cands {
            let m = |p: usize| if p == s1 { s2 } else if p == s2 { s1 } else { p };
            let decay = self.decay[s1].max(self.decay[s2]);
            let (mut fd, mut ff) = (0.0, 0.0);
            for &(a, b) in &fp {
                fd += self.ctx.dist.get(m(a), m(b)) as f64;
                ff += self.ctx.fid.get(m(a), m(b));
            }
            fd /= fp.len() as f64;
            ff /= fp.len() as f64;
            let (mut ed, mut ef) = (0.0, 0.0);
            if !ep.is_empty() {
                for &(a, b) in &ep {
                    ed += self.ctx.dist.get(m(a), m(b)) as f64;
                    ef += self.ctx.fid.get(m(a), m(b));
                }
                ed /= ep.len() as f64;
                ef /= ep.len() as f64;
            }
            hd.push(decay * (fd + w * ed));
            hf.push(decay * (ff + w * ef));
        }
        (hd, hf)
    }

    fn choose(&mut self, front: &[usize], ext: &[usize]) -> (usize, usize) {
        let adj = self.ctx.coupling.adjacency();
        let mut cands = Vec::new();
        for &g in front {
            for &q in &self.c.instructions[g].qubits {
                let p = self.layout.phys(q);
                for &nb in &adj[p] {
                    cands.push((p.min(nb), p.max(nb)));
                }
            }
        }
        cands.sort_unstable();
        cands.dedup();
        let (hd, hf) = self.scores(front, ext, &cands);
        let s_d = min_set(&cands, &hd);
        let chosen = match self.h {
            Heuristic::Distance => pick(&mut self.rng, &s_d),
            Heuristic::Fidelity => {
                let s = max_set(&cands, &hf);
                pick(&mut self.rng, &s)
            }
            Heuristic::Mixture => {
                if s_d.len() == 1 {
                    pick(&mut self.rng, &s_d)
                } else {
                    let sub: Vec<f64> =
                        s_d.iter().map(|s| hf[cands.iter().position(|c| c == s).unwrap()]).collect();
                    let best = max_set(&s_d, &sub);
                    pick(&mut self.rng, &best)
                }
            }
        };
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceStep { candidates: cands, s_d, chosen });
        }
        chosen
    }

    fn run(mut self) -> Result<RouteResult, RoutingError> {
        let c = self.c;
        let initial_layout = self.layout.clone();
        for i in c.instructions.iter().filter(|i| i.kind == InstrKind::Gate) {
            if i.qubits.len() > 2 {
                return Err(RoutingError::WideGate(i.name.clone()));
            }
            if i.qubits.len() == 2 && self.ctx.dist.get(self.layout.phys(i.qubits[0]), self.layout.phys(i.qubits[1])) == UNREACHABLE {
                return Err(RoutingError::Disconnected(i.qubits[0], i.qubits[1]));
            }
        }
        let deps = dependencies(c);
        let mut remaining = deps.preds.clone();
        let mut front: Vec<usize> = (0..c.instructions.len()).filter(|&i| remaining[i] == 0).collect();
        let num_phys = self.layout.num_physical();
        let valve = 10 * num_phys.max(5);
        let mut since_progress = 0;
        let mut since_reset = 0;
        loop {
            // execute everything that is ready
            let mut progressed = true;
            while progressed {
                progressed = false;
                let mut next = Vec::with_capacity(front.len());
                let mut ready = Vec::new();
                for &g in &front {
                    let instr = &c.instructions[g];
                    let ok = !is_2q(instr) || self.ctx.dist.get(self.layout.phys(instr.qubits[0]), self.layout.phys(instr.qubits[1])) == 1;
                    if ok {
                        ready.push(g);
                    } else {
                        next.push(g);
                    }
                }
                for g in ready {
                    progressed = true;
                    self.emit(&c.instructions[g]);
                    for &s in &deps.succs[g] {
                        remaining[s] -= 1;
                        if remaining[s] == 0 {
                            next.push(s);
                        }
                    }
                }
                next.sort_unstable();
                front = next;
                if progressed {
                    since_progress = 0;
                }
            }
            if front.is_empty() {
                break;
            }
            if since_progress >= valve {
                // force progress along a shortest path
                let g = *front
                    .iter()
                    .min_by_key(|&&g| {
                        let q = &c.instructions[g].qubits;
                        (self.ctx.dist.get(self.layout.phys(q[0]), self.layout.phys(q[1])), g)
                    })
                    .unwrap();
                let q = c.instructions[g].qubits.clone();
                let path = shortest_path(self.ctx.coupling, self.layout.phys(q[0]), self.layout.phys(q[1]))
                    .ok_or(RoutingError::Disconnected(q[0], q[1]))?;
                for w in path.windows(2).take(path.len() - 2) {
                    self.apply_swap(w[0], w[1]);
                }
                since_progress = 0;
                continue;
            }
            let ext = self.extended_set(&front, &deps, &remaining);
            let (a, b) = self.choose(&front, &ext);
            self.apply_swap(a, b);
            self.decay[a] += self.cfg.decay_delta;
            self.decay[b] += self.cfg.decay_delta;
            since_progress += 1;
            since_reset += 1;
            if since_reset >= self.cfg.decay_reset {
                self.decay.iter_mut().for_each(|d| *d = 1.0);
                since_reset = 0;
            }
        }
        Ok(RouteResult {
            circuit: self.out,
            initial_layout,
            final_layout: self.layout,
            num_swaps: self.num_swaps,
            trace: self.trace.unwrap_or_default(),
        })
    }
}

/// Routes `c` (logical qubits) starting from `layout`. The emitted circuit
/// acts on all physical qubits and contains explicit `swap` gates.
pub fn route(
    c: &Circuit,
    ctx: &RoutingContext,
    layout: &Layout,
    heuristic: Heuristic,
    cfg: SabreConfig,
    seed: u64,
    opts: RouteOptions,
) -> Result<RouteResult, RoutingError> {
    if layout.num_logical() != c.num_qubits() {
        return Err(RoutingError::LayoutSize(layout.num_logical(), c.num_qubits()));
    }
    let n = layout.num_physical();
    let out = opts.emit.then(|| Circuit {
        qregs: if n > 0 { vec![("q".into(), n)] } else { Vec::new() },
        cregs: c.cregs.clone(),
        instructions: Vec::new(),
        metadata: c.metadata.clone(),
    });
    Router {
        ctx,
        c,
        h: heuristic,
        cfg,
        layout: layout.clone(),
        decay: vec![1.0; n],
        rng: ChaCha8Rng::seed_from_u64(seed),
        out,
        num_swaps: 0,
        trace: opts.trace.then(Vec::new),
    }
    .run()
}

fn reversed(c: &Circuit) -> Circuit {
    let mut r = c.clone();
    r.instructions.reverse();
    r
}

/// Mean best-path fidelity over the circuit's interaction edges.
pub fn mean_edge_fidelity(c: &Circuit, fid: &FidelityMatrix, layout: &Layout) -> f64 {
    let g = circuit_weighted_graph(c);
    if g.num_edges() == 0 {
        return 1.0;
    }
    g.edges.keys().map(|&(a, b)| fid.get(layout.phys(a), layout.phys(b))).sum::<f64>() / g.num_edges() as f64
}

/// Reverse-traversal layout search: alternates forward and backward routing
/// `iterations` times from `start` and returns the forward starting layout
/// with the fewest inserted swaps (ties: higher mean edge fidelity).
pub fn sabre_layout(
    c: &Circuit,
    ctx: &RoutingContext,
    start: &Layout,
    heuristic: Heuristic,
    iterations: usize,
    cfg: SabreConfig,
    seed: u64,
) -> Result<Layout, RoutingError> {
    if iterations == 0 {
        return Ok(start.clone());
    }
    let rev = reversed(c);
    let mut best: Option<(usize, f64, Layout)> = None;
    let mut layout = start.clone();
    for it in 0..=iterations {
        let fwd = route(c, ctx, &layout, heuristic, cfg, seed.wrapping_add(2 * it as u64), RouteOptions::default())?;
        let fi = mean_edge_fidelity(c, ctx.fid, &layout);
        let better = match &best {
            None => true,
            Some((s, f, _)) => fwd.num_swaps < *s || (fwd.num_swaps == *s && fi > *f + 1e-12),
        };
        if better {
            best = Some((fwd.num_swaps, fi, layout.clone()));
        }
        if it < iterations {
            let back = route(&rev, ctx, &fwd.final_layout, heuristic, cfg, seed.wrapping_add(2 * it as u64 + 1), RouteOptions::default())?;
            layout = back.final_layout;
        }
    }
    Ok(best.unwrap().2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn line(n: usize, f: f64) -> CouplingGraph {
        let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1, f)).collect();
        CouplingGraph::from_edges(n, &e)
    }

    #[test]
    fn one_swap_on_a_line() {
        let g = line(3, 0.99);
        let (d, f) = (DistanceMatrix::new(&g), FidelityMatrix::new(&g));
        let ctx = RoutingContext { coupling: &g, dist: &d, fid: &f };
        let c = parse_qasm("qreg q[3]; cx q[0],q[2];").unwrap();
        for h in [Heuristic::Distance, Heuristic::Fidelity, Heuristic::Mixture] {
            let r = route(&c, &ctx, &Layout::trivial(3, 3), h, SabreConfig::default(), 1, RouteOptions { emit: true, trace: true }).unwrap();
            assert_eq!(r.num_swaps, 1);
            let out = r.circuit.unwrap();
            let cx = out.instructions.iter().find(|i| i.name == "cx").unwrap();
            assert!(g.has_edge(cx.qubits[0], cx.qubits[1]));
            assert!(r.trace.iter().all(|t| t.s_d.contains(&t.chosen) || h != Heuristic::Mixture));
        }
    }

    #[test]
    fn mixture_prefers_fidelity_among_ties() {
        // triangle-free square 0-1-2-3-0; cx(0,2) can be fixed by four swaps
        // of equal distance score, the best edge wins
        let g = CouplingGraph::from_edges(4, &[(0, 1, 0.99), (1, 2, 0.8), (2, 3, 0.8), (3, 0, 0.8)]);
        let (d, f) = (DistanceMatrix::new(&g), FidelityMatrix::new(&g));
        let ctx = RoutingContext { coupling: &g, dist: &d, fid: &f };
        let c = parse_qasm("qreg q[4]; cx q[0],q[2];").unwrap();
        let r = route(&c, &ctx, &Layout::trivial(4, 4), Heuristic::Mixture, SabreConfig::default(), 3, RouteOptions { emit: false, trace: true }).unwrap();
        assert_eq!(r.trace[0].s_d.len(), 4);
        // swapping across (1,2) leaves the gate on the 0.99 edge
        assert_eq!(r.trace[0].chosen, (1, 2));
    }

    #[test]
    fn isomorphic_circuit_needs_no_swaps() {
        let g = line(4, 0.9);
        let (d, f) = (DistanceMatrix::new(&g), FidelityMatrix::new(&g));
        let ctx = RoutingContext { coupling: &g, dist: &d, fid: &f };
        let c = parse_qasm("qreg q[4]; cx q[0],q[1]; cx q[1],q[2]; cx q[2],q[3]; cx q[0],q[1];").unwrap();
        let r = route(&c, &ctx, &Layout::trivial(4, 4), Heuristic::Distance, SabreConfig::default(), 0, RouteOptions::default()).unwrap();
        assert_eq!(r.num_swaps, 0);
    }

    #[test]
    fn disconnected_device_is_an_error() {
        let g = CouplingGraph::from_edges(4, &[(0, 1, 0.9), (2, 3, 0.9)]);
        let (d, f) = (DistanceMatrix::new(&g), FidelityMatrix::new(&g));
        let ctx = RoutingContext { coupling: &g, dist: &d, fid: &f };
        let c = parse_qasm("qreg q[4]; cx q[0],q[3];").unwrap();
        let e = route(&c, &ctx, &Layout::trivial(4, 4), Heuristic::Distance, SabreConfig::default(), 0, RouteOptions::default());
        assert_eq!(e.unwrap_err(), RoutingError::Disconnected(0, 3));
    }
}
