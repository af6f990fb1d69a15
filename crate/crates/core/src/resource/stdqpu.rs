use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::qpu::Qpu;

/// Square-lattice view of a chip: each active qubit gets a `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StdQpu {
    pub rows: usize,
    pub cols: usize,
    pub embedding: BTreeMap<usize, (usize, usize)>,
    /// Set when no lattice embedding exists and a 1xN line was used.
    pub degenerate: bool,
}

fn neighbors(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 == b.0 && a.1.abs_diff(b.1) == 1) || (a.1 == b.1 && a.0.abs_diff(b.0) == 1)
}

/// Row-major embedding with the widest row length that maps every coupling
/// onto lattice neighbors.
pub fn build_stdqpu(q: &Qpu) -> StdQpu {
    let active = q.active_qubits();
    let n = q.info.qubits_num;
    let span = active.iter().max().map_or(1, |m| m + 1);
    for cols in (1..=span).rev() {
        let pos = |x: usize| (x / cols, x % cols);
        if q.graph.edges.keys().all(|&(a, b)| neighbors(pos(a), pos(b))) {
            let embedding = active.iter().map(|&x| (x, pos(x))).collect();
            return StdQpu { rows: span.div_ceil(cols), cols, embedding, degenerate: false };
        }
    }
    log::warn!("chip {} has no lattice embedding; using a 1x{n} line", q.name());
    StdQpu { rows: 1, cols: n, embedding: active.iter().map(|&x| (x, (0, x))).collect(), degenerate: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transpiler::Backend;

    fn qpu(n: usize, edges: &[(usize, usize)]) -> Qpu {
        Qpu::new(Backend::new("t", n, edges.iter().map(|&(a, b)| (a, b, 0.99)).collect(), &[])).unwrap()
    }

    #[test]
    fn grid_and_line() {
        let s = build_stdqpu(&qpu(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]));
        assert_eq!((s.rows, s.cols, s.degenerate), (2, 2, false));
        let s = build_stdqpu(&qpu(4, &[(0, 1), (1, 2), (2, 3)]));
        assert_eq!((s.rows, s.cols), (1, 4));
        let s = build_stdqpu(&qpu(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]));
        assert!(s.degenerate);
    }
}
