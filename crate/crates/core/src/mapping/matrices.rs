use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::CouplingGraph;

pub const UNREACHABLE: u32 = u32::MAX;

/// All-pairs shortest-path edge counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub d: Vec<Vec<u32>>,
}

impl DistanceMatrix {
    pub fn new(g: &CouplingGraph) -> Self {
        let adj = g.adjacency();
        let n = g.num_nodes();
        let d = (0..n)
            .map(|s| {
                let mut row = vec![UNREACHABLE; n];
                row[s] = 0;
                let mut q = VecDeque::from([s]);
                while let Some(x) = q.pop_front() {
                    for &y in &adj[x] {
                        if row[y] == UNREACHABLE {
                            row[y] = row[x] + 1;
                            q.push_back(y);
                        }
                    }
                }
                row
            })
            .collect();
        DistanceMatrix { d }
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.d[a][b]
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Best-path products of two-qubit fidelities, with a next-hop table.
///
/// `f[i][j]` is 0 when `j` is unreachable from `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityMatrix {
    pub f: Vec<Vec<f64>>,
    next: Vec<Vec<Option<usize>>>,
}

impl FidelityMatrix {
    pub fn new(g: &CouplingGraph) -> Self {
        let n = g.num_nodes();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &g.edges {
            if w > 0.0 {
                adj[a].push((b, -w.ln()));
                adj[b].push((a, -w.ln()));
            }
        }
        let mut f = vec![vec![0.0; n]; n];
        let mut next = vec![vec![None; n]; n];
        for s in 0..n {
            let mut dist = vec![f64::INFINITY; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0.0;
            let mut heap = BinaryHeap::from([Entry(0.0, s)]);
            while let Some(Entry(c, x)) = heap.pop() {
                if c > dist[x] {
                    continue;
                }
                for &(y, w) in &adj[x] {
                    let nc = c + w;
                    if nc < dist[y] {
                        dist[y] = nc;
                        parent[y] = x;
                        heap.push(Entry(nc, y));
                    }
                }
            }
            for t in 0..n {
                if dist[t].is_finite() {
                    f[s][t] = (-dist[t]).exp();
                    if t != s {
                        let mut cur = t;
                        while parent[cur] != s {
                            cur = parent[cur];
                        }
                        next[s][t] = Some(cur);
                    }
                }
            }
        }
        // keep the matrix exactly symmetric
        for i in 0..n {
            for j in i + 1..n {
                let m = f[i][j].max(f[j][i]);
                f[i][j] = m;
                f[j][i] = m;
            }
        }
        FidelityMatrix { f, next }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.f[a][b]
    }

    /// Highest-fidelity path from `a` to `b`, endpoints included.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if a == b {
            return Some(vec![a]);
        }
        let mut p = vec![a];
        let mut cur = a;
        while cur != b {
            cur = self.next[cur][b]?;
            p.push(cur);
        }
        Some(p)
    }
}

/// One shortest (edge-count) path from `a` to `b`, endpoints included.
pub fn shortest_path(g: &CouplingGraph, a: usize, b: usize) -> Option<Vec<usize>> {
    let adj = g.adjacency();
    let mut parent = vec![usize::MAX; g.num_nodes()];
    parent[a] = a;
    let mut q = VecDeque::from([a]);
    while let Some(x) = q.pop_front() {
        if x == b {
            break;
        }
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                q.push_back(y);
            }
        }
    }
    if parent[b] == usize::MAX {
        return None;
    }
    let mut p = vec![b];
    while *p.last().unwrap() != a {
        p.push(parent[*p.last().unwrap()]);
    }
    p.reverse();
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_distances() {
        let g = CouplingGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let d = DistanceMatrix::new(&g);
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(shortest_path(&g, 2, 0), Some(vec![2, 1, 0]));
    }

    #[test]
    fn triangle_prefers_two_hop_path() {
        let g = CouplingGraph::from_edges(3, &[(0, 1, 0.9), (1, 2, 0.99), (0, 2, 0.8)]);
        let f = FidelityMatrix::new(&g);
        assert!((f.get(0, 2) - 0.891).abs() < 1e-12);
        assert_eq!(f.path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(f.get(1, 1), 1.0);
    }

    #[test]
    fn disconnected_pairs() {
        let g = CouplingGraph::from_edges(4, &[(0, 1, 0.9), (2, 3, 0.9)]);
        assert_eq!(DistanceMatrix::new(&g).get(0, 3), UNREACHABLE);
        let f = FidelityMatrix::new(&g);
        assert_eq!(f.get(0, 3), 0.0);
        assert_eq!(f.path(0, 3), None);
    }
}
