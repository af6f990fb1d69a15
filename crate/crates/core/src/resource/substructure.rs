//! Mining of connected chip substructures by greedy growth from seed edges.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::CouplingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Fidelity,
    Degree,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Fidelity, Strategy::Degree, Strategy::Random];
}

/// A connected set of physical qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubQpu {
    /// Ascending physical qubit ids.
    pub qubits: Vec<usize>,
    pub strategy: Option<Strategy>,
    /// Mean fidelity of the induced couplings (1q fidelity for one qubit).
    pub avg_fidelity: f64,
    /// Product of the induced coupling fidelities.
    pub product_fidelity: f64,
}

impl SubQpu {
    pub fn new(g: &CouplingGraph, mut qubits: Vec<usize>, strategy: Option<Strategy>) -> Self {
        qubits.sort_unstable();
        let set: BTreeSet<usize> = qubits.iter().copied().collect();
        let fs: Vec<f64> =
            g.edges.iter().filter(|((a, b), _)| set.contains(a) && set.contains(b)).map(|(_, &f)| f).collect();
        let (avg, prod) = if fs.is_empty() {
            (g.node_weights.get(qubits[0]).copied().flatten().unwrap_or(1.0), 1.0)
        } else {
            (fs.iter().sum::<f64>() / fs.len() as f64, fs.iter().product())
        };
        SubQpu { qubits, strategy, avg_fidelity: avg, product_fidelity: prod }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Largest size mined; defaults to `min(active qubits, 30)`.
    pub n_max: Option<usize>,
    pub top_k: usize,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig { n_max: None, top_k: 200, strategies: Strategy::ALL.to_vec(), seed: 0 }
    }
}

fn cmp_subs(a: &SubQpu, b: &SubQpu, prio: &BTreeSet<usize>) -> std::cmp::Ordering {
    let pa = a.qubits.iter().filter(|q| prio.contains(q)).count();
    let pb = b.qubits.iter().filter(|q| prio.contains(q)).count();
    b.avg_fidelity
        .total_cmp(&a.avg_fidelity)
        .then(b.product_fidelity.total_cmp(&a.product_fidelity))
        .then(pb.cmp(&pa))
        .then_with(|| a.qubits.cmp(&b.qubits))
}

/// Greedy growth from `seed` up to `n_max` qubits; returns the insertion
/// order (the first `k` entries form the size-`k` substructure).
fn grow(
    g: &CouplingGraph,
    adj: &[Vec<usize>],
    allowed: &[bool],
    seed: (usize, usize),
    n_max: usize,
    strategy: Strategy,
    prio: &BTreeSet<usize>,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut order = vec![seed.0, seed.1];
    let mut inside = vec![false; adj.len()];
    inside[seed.0] = true;
    inside[seed.1] = true;
    // frontier qubit -> best coupling fidelity into the set
    let mut frontier: BTreeMap<usize, f64> = BTreeMap::new();
    let touch = |x: usize, inside: &[bool], frontier: &mut BTreeMap<usize, f64>| {
        for &y in &adj[x] {
            if !inside[y] && allowed[y] {
                let f = g.edge_weight(x, y).unwrap_or(0.0);
                let e = frontier.entry(y).or_insert(f);
                *e = e.max(f);
            }
        }
    };
    touch(seed.0, &inside, &mut frontier);
    touch(seed.1, &inside, &mut frontier);
    while order.len() < n_max && !frontier.is_empty() {
        let next = match strategy {
            Strategy::Random => {
                let k = rng.gen_range(0..frontier.len());
                *frontier.keys().nth(k).unwrap()
            }
            _ => {
                let score = |x: usize| match strategy {
                    Strategy::Fidelity => frontier[&x],
                    _ => deg[x] as f64,
                };
                // ties: priority qubits, then the lower index
                *frontier
                    .keys()
                    .max_by(|&&a, &&b| {
                        score(a).total_cmp(&score(b)).then(prio.contains(&a).cmp(&prio.contains(&b))).then(b.cmp(&a))
                    })
                    .unwrap()
            }
        };
        frontier.remove(&next);
        inside[next] = true;
        order.push(next);
        touch(next, &inside, &mut frontier);
    }
    order
}

/// Substructure lists for every size `1..=n_max`, each sorted by average
/// fidelity (descending), deduplicated and truncated to `top_k`.
///
/// Only qubits flagged in `allowed` take part.
pub fn find_substructures(
    g: &CouplingGraph,
    allowed: &[bool],
    priority: &[usize],
    cfg: &MiningConfig,
    n_max: usize,
) -> Result<BTreeMap<usize, Vec<SubQpu>>, String> {
    if n_max < 1 {
        return Err("n_max must be at least 1".into());
    }
    let prio: BTreeSet<usize> = priority.iter().copied().collect();
    let adj = g.adjacency();
    let mut out: BTreeMap<usize, Vec<SubQpu>> = BTreeMap::new();

    let mut singles: Vec<SubQpu> =
        (0..g.num_nodes()).filter(|&q| allowed[q]).map(|q| SubQpu::new(g, vec![q], None)).collect();
    singles.sort_by(|a, b| cmp_subs(a, b, &prio));
    singles.truncate(cfg.top_k);
    if !singles.is_empty() {
        out.insert(1, singles);
    }
    if n_max < 2 {
        return Ok(out);
    }

    let mut seeds: Vec<((usize, usize), f64)> =
        g.edges.iter().filter(|((a, b), _)| allowed[*a] && allowed[*b]).map(|(&e, &f)| (e, f)).collect();
    seeds.sort_by(|a, b| {
        let pa = prio.contains(&a.0 .0) as u8 + prio.contains(&a.0 .1) as u8;
        let pb = prio.contains(&b.0 .0) as u8 + prio.contains(&b.0 .1) as u8;
        b.1.total_cmp(&a.1).then(pb.cmp(&pa)).then(a.0.cmp(&b.0))
    });
    if seeds.is_empty() {
        return Ok(out);
    }

    let mut found: BTreeMap<usize, BTreeMap<Vec<usize>, Strategy>> = BTreeMap::new();
    found.insert(2, seeds.iter().map(|((a, b), _)| (vec![*a, *b], Strategy::Fidelity)).collect());
    for &strategy in &cfg.strategies {
        for (k, &(e, _)) in seeds.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((k as u64) << 8) ^ strategy as u64);
            let order = grow(g, &adj, allowed, e, n_max, strategy, &prio, &mut rng);
            for n in 3..=order.len() {
                let mut set = order[..n].to_vec();
                set.sort_unstable();
                found.entry(n).or_default().entry(set).or_insert(strategy);
            }
        }
    }
    for (n, sets) in found {
        let mut subs: Vec<SubQpu> = sets.into_iter().map(|(q, s)| SubQpu::new(g, q, Some(s))).collect();
        subs.sort_by(|a, b| cmp_subs(a, b, &prio));
        subs.truncate(cfg.top_k);
        out.insert(n, subs);
    }
    Ok(out)
}
