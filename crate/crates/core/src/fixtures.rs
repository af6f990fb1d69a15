//! Reference circuit and chip used by tests, examples and the CLI demo.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::WeightedGraph;
use crate::transpiler::Backend;

/// Six-qubit reference circuit. Its interaction graph is a 2x3 ladder in
/// which the (0, 1) pair carries two gates.
pub const REFERENCE_QASM: &str = "OPENQASM 2.0;
include \"qelib1.inc\";
qreg q[6];
creg c[6];
h q[0];
h q[3];
cx q[0],q[1];
cx q[1],q[2];
cx q[3],q[4];
cx q[4],q[5];
cx q[0],q[3];
rz(0.5) q[4];
cx q[1],q[4];
cx q[2],q[5];
cx q[0],q[1];
t q[2];
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
measure q[3] -> c[3];
measure q[4] -> c[4];
measure q[5] -> c[5];
";

pub const LATTICE_ROWS: usize = 12;
pub const LATTICE_COLS: usize = 13;
pub const LATTICE_HOLES: usize = 34;
/// Physical qubits of the calibrated high-fidelity 2x3 block.
pub const HIGH_FIDELITY_BLOCK: [usize; 6] = [61, 62, 63, 74, 75, 76];

/// 12x13 lattice chip (ids `row * 13 + col`) with 34 uncoupled qubits,
/// 122 active. Couplings inside [`HIGH_FIDELITY_BLOCK`] lie in
/// [0.995, 0.999]; all others are drawn from [0.90, 0.99].
pub fn lattice_chip(seed: u64) -> Backend {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = LATTICE_ROWS * LATTICE_COLS;
    let block: BTreeSet<usize> = HIGH_FIDELITY_BLOCK.into_iter().collect();
    let mut full = WeightedGraph::new(n);
    for r in 0..LATTICE_ROWS {
        for c in 0..LATTICE_COLS {
            let q = r * LATTICE_COLS + c;
            for nb in [(c + 1 < LATTICE_COLS).then_some(q + 1), (r + 1 < LATTICE_ROWS).then_some(q + LATTICE_COLS)]
                .into_iter()
                .flatten()
            {
                let w = if block.contains(&q) && block.contains(&nb) {
                    rng.gen_range(0.995..=0.999)
                } else {
                    rng.gen_range(0.90..=0.99)
                };
                full.add_edge(q, nb, w);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).filter(|q| !block.contains(q)).collect();
    order.shuffle(&mut rng);
    let mut active: BTreeSet<usize> = (0..n).collect();
    let mut holes = 0;
    for q in order {
        if holes == LATTICE_HOLES {
            break;
        }
        active.remove(&q);
        let rest: Vec<usize> = active.iter().copied().collect();
        if full.is_connected_subset(&rest) {
            holes += 1;
        } else {
            active.insert(q);
        }
    }

    let coupling = full
        .edges
        .iter()
        .filter(|((a, b), _)| active.contains(a) && active.contains(b))
        .map(|(&(a, b), &w)| (a, b, (w * 1e4f64).round() / 1e4))
        .collect();
    let mut b = Backend::new("lattice", n, coupling, &[]);
    b.basis_gates = Backend::default_basis();
    b.single_qubit_fidelity = active.iter().map(|&q| (q, (rng.gen_range(0.99..0.9995f64) * 1e4).round() / 1e4)).collect();
    b
}

/// The chip document consumed by `update-chip`.
pub fn lattice_chip_json(seed: u64) -> String {
    serde_json::to_string_pretty(&lattice_chip(seed)).expect("backend serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::circuit_weighted_graph;
    use crate::qasm::parse_qasm;
    use crate::resource::Qpu;
    use std::collections::BTreeMap;

    #[test]
    fn reference_graph_is_a_weighted_ladder() {
        let g = circuit_weighted_graph(&parse_qasm(REFERENCE_QASM).unwrap());
        let expect = BTreeMap::from([
            ((0, 1), 2.0),
            ((0, 3), 1.0),
            ((1, 2), 1.0),
            ((1, 4), 1.0),
            ((2, 5), 1.0),
            ((3, 4), 1.0),
            ((4, 5), 1.0),
        ]);
        assert_eq!(g.edges, expect);
    }

    #[test]
    fn lattice_chip_shape() {
        let b = lattice_chip(1);
        let qpu = Qpu::new(b.clone()).unwrap();
        let active = qpu.active_qubits();
        assert_eq!(b.qubits_num, 156);
        assert_eq!(active.len(), 122);
        assert!(qpu.graph.is_connected_subset(&active));
        for w in HIGH_FIDELITY_BLOCK.windows(2).filter(|w| w[1] == w[0] + 1) {
            assert!(b.edge_fidelity(w[0], w[1]).unwrap() >= 0.995);
        }
        assert_eq!(lattice_chip_json(1), lattice_chip_json(1));
    }
}
