use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;

/// Injective map from logical qubits `0..n` to physical qubits `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    l2p: Vec<usize>,
    p2l: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(l2p: Vec<usize>, num_physical: usize) -> Result<Self, String> {
        let mut p2l = vec![None; num_physical];
        for (l, &p) in l2p.iter().enumerate() {
            if p >= num_physical {
                return Err(format!("physical qubit {p} out of range 0..{num_physical}"));
            }
            if p2l[p].is_some() {
                return Err(format!("physical qubit {p} assigned twice"));
            }
            p2l[p] = Some(l);
        }
        Ok(Layout { l2p, p2l })
    }

    pub fn trivial(n: usize, num_physical: usize) -> Self {
        Self::new((0..n).collect(), num_physical).expect("circuit larger than device")
    }

    pub fn phys(&self, l: usize) -> usize {
        self.l2p[l]
    }

    pub fn logical(&self, p: usize) -> Option<usize> {
        self.p2l[p]
    }

    pub fn l2p(&self) -> &[usize] {
        &self.l2p
    }

    pub fn num_logical(&self) -> usize {
        self.l2p.len()
    }

    pub fn num_physical(&self) -> usize {
        self.p2l.len()
    }

    /// Exchanges the logical contents of two physical qubits.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l[a] = lb;
        self.p2l[b] = la;
        if let Some(l) = la {
            self.l2p[l] = b;
        }
        if let Some(l) = lb {
            self.l2p[l] = a;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitStrategy {
    Degree,
    Weight,
    Random,
    Trivial,
}

impl std::str::FromStr for InitStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degree" => Ok(Self::Degree),
            "weight" => Ok(Self::Weight),
            "random" | "rand" => Ok(Self::Random),
            "trivial" => Ok(Self::Trivial),
            _ => Err(format!("unknown initial layout strategy '{s}'")),
        }
    }
}

/// Nodes by degree descending; ties by weight sum descending when
/// `by_weight`, then by index.
pub fn sorted_nodes(g: &WeightedGraph, by_weight: bool) -> Vec<usize> {
    let deg = g.degrees();
    let ws = g.weight_sums();
    let mut v: Vec<usize> = (0..g.num_nodes()).collect();
    v.sort_by(|&a, &b| {
        deg[b].cmp(&deg[a]).then_with(|| if by_weight { ws[b].total_cmp(&ws[a]) } else { std::cmp::Ordering::Equal }).then(a.cmp(&b))
    });
    v
}

/// Structure-aware initial layout: pairs circuit and device nodes sorted by
/// degree.
pub fn initial_layout(gqc: &WeightedGraph, gdev: &WeightedGraph, strategy: InitStrategy, seed: u64) -> Result<Layout, String> {
    let n = gqc.num_nodes();
    let m = gdev.num_nodes();
    if n > m {
        return Err(format!("circuit needs {n} qubits but device has {m}"));
    }
    let l2p = match strategy {
        InitStrategy::Trivial => (0..n).collect(),
        InitStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(&mut rng);
            p.truncate(n);
            p
        }
        InitStrategy::Degree | InitStrategy::Weight => {
            let by_w = strategy == InitStrategy::Weight;
            let qs = sorted_nodes(gqc, by_w);
            let ps = sorted_nodes(gdev, by_w);
            let mut l2p = vec![0; n];
            for (q, p) in qs.into_iter().zip(ps) {
                l2p[q] = p;
            }
            l2p
        }
    };
    Layout::new(l2p, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_pairing_fixture() {
        let circ = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 3, 1.0), (3, 2, 1.0)]);
        let dev = WeightedGraph::from_edges(4, &[(2, 0, 1.0), (2, 1, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        assert_eq!(sorted_nodes(&circ, false), vec![1, 3, 0, 2]);
        assert_eq!(sorted_nodes(&dev, false), vec![2, 0, 3, 1]);
        let l = initial_layout(&circ, &dev, InitStrategy::Degree, 0).unwrap();
        assert_eq!((l.phys(1), l.phys(3), l.phys(0), l.phys(2)), (2, 0, 3, 1));
    }

    #[test]
    fn weight_breaks_degree_ties() {
        // 0-1-2-3 path: nodes 1 and 2 tie on degree, 2 is heavier
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 5.0)]);
        assert_eq!(sorted_nodes(&g, false), vec![1, 2, 0, 3]);
        assert_eq!(sorted_nodes(&g, true), vec![2, 1, 3, 0]);
    }

    #[test]
    fn swap_updates_both_directions() {
        let mut l = Layout::new(vec![2, 0], 3).unwrap();
        l.swap_physical(0, 1);
        assert_eq!(l.l2p(), &[2, 1]);
        assert_eq!(l.logical(0), None);
        l.swap_physical(1, 2);
        assert_eq!(l.l2p(), &[1, 2]);
    }
}
