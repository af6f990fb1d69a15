//! Small undirected weighted graphs for circuits and coupling maps.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;

/// Undirected graph on nodes `0..n` with optional node weights and
/// real edge weights. Edges are stored as `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub node_weights: Vec<Option<f64>>,
    pub edges: BTreeMap<(usize, usize), f64>,
}

/// Coupling graph: node weight = single-qubit fidelity, edge weight =
/// two-qubit gate fidelity.
pub type CouplingGraph = WeightedGraph;

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { node_weights: vec![None; n], edges: BTreeMap::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut g = Self::new(n);
        for &(a, b, w) in edges {
            g.add_edge(a, b, w);
        }
        g
    }

    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Adds or overwrites an edge. Self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize, w: f64) {
        if a == b {
            return;
        }
        let n = a.max(b) + 1;
        if n > self.node_weights.len() {
            self.node_weights.resize(n, None);
        }
        self.edges.insert(key(a, b), w);
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        self.edges.get(&key(a, b)).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains_key(&key(a, b))
    }

    /// Adjacency lists, neighbors ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(a, b) in self.edges.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_nodes()];
        for &(a, b) in self.edges.keys() {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Sum of incident edge weights per node.
    pub fn weight_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.num_nodes()];
        for (&(a, b), &w) in &self.edges {
            s[a] += w;
            s[b] += w;
        }
        s
    }

    pub fn max_edge_weight(&self) -> f64 {
        self.edges.values().copied().fold(0.0, f64::max)
    }

    /// Copy with edge weights divided by the maximum weight.
    pub fn normalized(&self) -> Self {
        let m = self.max_edge_weight();
        let mut g = self.clone();
        if m > 0.0 {
            for w in g.edges.values_mut() {
                *w /= m;
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_nodes()];
        let mut out = Vec::new();
        for s in 0..self.num_nodes() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut q = VecDeque::from([s]);
            seen[s] = true;
            while let Some(x) = q.pop_front() {
                comp.push(x);
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        q.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True if the nodes in `set` induce a connected subgraph.
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let members: BTreeSet<usize> = set.iter().copied().collect();
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([set[0]]);
        let mut q = VecDeque::from([set[0]]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if members.contains(&y) && seen.insert(y) {
                    q.push_back(y);
                }
            }
        }
        seen.len() == members.len()
    }

    /// Subgraph induced by `nodes`, relabelled to `0..nodes.len()` in the
    /// given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Self {
        let index: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut g = Self::new(nodes.len());
        for (i, &n) in nodes.iter().enumerate() {
            g.node_weights[i] = self.node_weights.get(n).copied().flatten();
        }
        for (&(a, b), &w) in &self.edges {
            if let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) {
                g.add_edge(ia, ib, w);
            }
        }
        g
    }
}

/// Interaction graph of a circuit: one node per circuit qubit, edge weight =
/// number of gates acting on both endpoints. Gates on three or more qubits
/// contribute a complete subgraph.
pub fn circuit_weighted_graph(c: &Circuit) -> WeightedGraph {
    let mut g = WeightedGraph::new(c.num_qubits());
    for i in c.instructions.iter().filter(|i| i.is_gate() && i.qubits.len() >= 2) {
        for (k, &a) in i.qubits.iter().enumerate() {
            for &b in &i.qubits[k + 1..] {
                let w = g.edge_weight(a, b).unwrap_or(0.0);
                g.add_edge(a, b, w + 1.0);
            }
        }
    }
    g
}
