//! Backtracking graph isomorphism on unlabeled structure (weights ignored).

use crate::graph::WeightedGraph;

struct Matcher<'a> {
    adj1: Vec<Vec<bool>>,
    adj2: Vec<Vec<bool>>,
    deg1: Vec<usize>,
    deg2: Vec<usize>,
    order: &'a [usize],
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    induced: bool,
}

impl Matcher<'_> {
    fn feasible(&self, u: usize, v: usize) -> bool {
        if self.used[v] || (self.induced && self.deg1[u] != self.deg2[v]) || self.deg1[u] > self.deg2[v] {
            return false;
        }
        self.order.iter().filter_map(|&w| self.map[w].map(|x| (w, x))).all(|(w, x)| {
            let e1 = self.adj1[u][w];
            let e2 = self.adj2[v][x];
            if self.induced {
                e1 == e2
            } else {
                !e1 || e2
            }
        })
    }

    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        for v in 0..self.adj2.len() {
            if self.feasible(u, v) {
                self.map[u] = Some(v);
                self.used[v] = true;
                if self.search(depth + 1) {
                    return true;
                }
                self.map[u] = None;
                self.used[v] = false;
            }
        }
        false
    }
}

fn matrix(g: &WeightedGraph, n: usize) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in g.edges.keys() {
        m[a][b] = true;
        m[b][a] = true;
    }
    m
}

/// Nodes in BFS order from the highest-degree node of each component, so
/// every node after the first of its component has a mapped neighbor.
fn match_order(g: &WeightedGraph) -> Vec<usize> {
    let adj = g.adjacency();
    let deg = g.degrees();
    let mut seen = vec![false; g.num_nodes()];
    let mut order = Vec::with_capacity(g.num_nodes());
    let mut roots: Vec<usize> = (0..g.num_nodes()).collect();
    roots.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut q = std::collections::VecDeque::from([r]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
    }
    order
}

fn run(g1: &WeightedGraph, g2: &WeightedGraph, induced: bool) -> Option<Vec<usize>> {
    let (n1, n2) = (g1.num_nodes(), g2.num_nodes());
    if n1 > n2 || (induced && (n1 != n2 || g1.num_edges() != g2.num_edges())) || g1.num_edges() > g2.num_edges() {
        return None;
    }
    if induced {
        let mut d1 = g1.degrees();
        let mut d2 = g2.degrees();
        d1.sort_unstable();
        d2.sort_unstable();
        if d1 != d2 {
            return None;
        }
    }
    let order = match_order(g1);
    let mut m = Matcher {
        adj1: matrix(g1, n1),
        adj2: matrix(g2, n2),
        deg1: g1.degrees(),
        deg2: g2.degrees(),
        order: &order,
        map: vec![None; n1],
        used: vec![false; n2],
        induced,
    };
    m.search(0).then(|| m.map.into_iter().map(Option::unwrap).collect())
}

/// A bijection `f` with `(a, b)` an edge of `g1` iff `(f[a], f[b])` is an
/// edge of `g2`, or `None`.
pub fn graph_isomorphic(g1: &WeightedGraph, g2: &WeightedGraph) -> Option<Vec<usize>> {
    run(g1, g2, true)
}

/// An injective `f` mapping every edge of `g1` onto an edge of `g2`.
pub fn subgraph_monomorphism(g1: &WeightedGraph, g2: &WeightedGraph) -> Option<Vec<usize>> {
    run(g1, g2, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::from_edges(n, &e.iter().map(|&(a, b)| (a, b, 1.0)).collect::<Vec<_>>())
    }

    #[test]
    fn triangle_and_path() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let path = g(3, &[(0, 1), (1, 2)]);
        assert!(graph_isomorphic(&tri, &tri).is_some());
        assert!(graph_isomorphic(&tri, &path).is_none());
        let m = graph_isomorphic(&path, &g(3, &[(2, 0), (0, 1)])).unwrap();
        assert_eq!(m[1], 0);
        assert!(subgraph_monomorphism(&path, &tri).is_some());
        assert!(subgraph_monomorphism(&tri, &path).is_none());
    }
}
