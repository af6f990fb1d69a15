use proptest::prelude::*;

use qtrans_core::dag::CircuitDag;
use qtrans_core::graph::WeightedGraph;
use qtrans_core::metrics::{circuit_cost, hellinger_fidelity, Distribution};
use qtrans_core::passes::optimize::{cancel_inverses, fuse_1q};
use qtrans_core::random::{backend_from_graph, random_circuit, random_connected_graph};
use qtrans_core::resource::{find_substructures, MiningConfig};
use qtrans_core::selector::{edge_similarity, graph_isomorphic, wl_kernel, KernelConfig};
use qtrans_core::sim::unitary;
use qtrans_core::standardize::standardize;
use qtrans_core::synthesis::phase_distance;
use qtrans_core::{emit_qasm, parse_qasm, Instruction};

fn measured(n: usize, gates: usize, seed: u64) -> qtrans_core::Circuit {
    let mut c = random_circuit(n, gates, seed);
    c.cregs = vec![("c".into(), n)];
    for q in 0..n {
        c.push(Instruction::measure(q, q));
    }
    c
}

fn small_graph(n: usize, bits: u64) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if bits >> k & 1 == 1 {
                g.add_edge(a, b, 1.0);
            }
            k += 1;
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    a.num_nodes() == b.num_nodes()
        && a.num_edges() == b.num_edges()
        && permutations(a.num_nodes()).iter().any(|p| a.edges.keys().all(|&(x, y)| b.has_edge(p[x], p[y])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qasm_round_trip(n in 1usize..6, gates in 0usize..40, seed in any::<u64>()) {
        let c = measured(n, gates, seed);
        let text = emit_qasm(&c).unwrap();
        prop_assert_eq!(parse_qasm(&text).unwrap(), c);
    }

    #[test]
    fn standardize_is_idempotent(n in 1usize..6, gates in 0usize..30, seed in any::<u64>()) {
        let s = standardize(&random_circuit(n, gates, seed));
        prop_assert_eq!(standardize(&s), s);
    }

    #[test]
    fn dag_round_trip(n in 1usize..6, gates in 0usize..40, seed in any::<u64>()) {
        let c = measured(n, gates, seed);
        prop_assert_eq!(CircuitDag::from_circuit(&c).to_circuit(), c);
    }

    #[test]
    fn optimization_preserves_unitary(n in 1usize..4, gates in 0usize..30, seed in any::<u64>()) {
        let c = random_circuit(n, gates, seed);
        let mut dag = CircuitDag::from_circuit(&c);
        cancel_inverses(&mut dag);
        fuse_1q(&mut dag);
        cancel_inverses(&mut dag);
        let out = dag.to_circuit();
        prop_assert!(out.two_qubit_gate_count() <= c.two_qubit_gate_count());
        prop_assert!(phase_distance(&unitary(&out).unwrap(), &unitary(&c).unwrap()) < 1e-8);
    }

    #[test]
    fn wl_kernel_symmetric_and_bounded(s1 in any::<u64>(), s2 in any::<u64>(), n1 in 2usize..8, n2 in 2usize..8, w in 0.0f64..2.0) {
        let a = random_connected_graph(n1, 0.3, (0.1, 1.0), s1);
        let b = random_connected_graph(n2, 0.3, (0.1, 1.0), s2);
        let cfg = KernelConfig::default();
        let k_ab = wl_kernel(&a, &b, cfg).unwrap();
        prop_assert!((k_ab - wl_kernel(&b, &a, cfg).unwrap()).abs() < 1e-12);
        let plain = KernelConfig { weighted: false, ..cfg };
        let unweighted = wl_kernel(&a, &b, plain).unwrap();
        prop_assert!(k_ab <= unweighted + 1e-12);
        prop_assert_eq!(edge_similarity(w, w), 1.0);
    }

    #[test]
    fn isomorphism_matches_brute_force(n in 1usize..7, b1 in any::<u64>(), b2 in any::<u64>(), relabel in any::<bool>()) {
        let a = small_graph(n, b1);
        let b = if relabel {
            // a shuffled copy of `a`
            let mut g = WeightedGraph::new(n);
            for &(x, y) in a.edges.keys() {
                g.add_edge((x * 5 + 3) % n.max(1), (y * 5 + 3) % n.max(1), 1.0);
            }
            if g.num_edges() == a.num_edges() { g } else { small_graph(n, b2) }
        } else {
            small_graph(n, b2)
        };
        let got = graph_isomorphic(&a, &b);
        prop_assert_eq!(got.is_some(), brute_isomorphic(&a, &b));
        if let Some(m) = got {
            prop_assert!(a.edges.keys().all(|&(x, y)| b.has_edge(m[x], m[y])));
        }
    }

    #[test]
    fn mined_substructures_are_connected_and_sorted(seed in any::<u64>(), n in 3usize..14) {
        let g = random_connected_graph(n, 0.2, (0.85, 0.999), seed);
        let cfg = MiningConfig { seed, ..MiningConfig::default() };
        let subs = find_substructures(&g, &vec![true; n], &[], &cfg, n).unwrap();
        for (size, list) in &subs {
            prop_assert!(!list.is_empty());
            for s in list {
                prop_assert_eq!(s.qubits.len(), *size);
                prop_assert!(g.is_connected_subset(&s.qubits));
            }
            prop_assert!(list.windows(2).all(|w| w[0].avg_fidelity >= w[1].avg_fidelity));
        }
    }

    #[test]
    fn hellinger_symmetric(ps in prop::collection::vec(0.0f64..1.0, 4), qs in prop::collection::vec(0.0f64..1.0, 4)) {
        let norm = |v: &[f64]| -> Distribution {
            let s: f64 = v.iter().sum::<f64>() + 1e-3;
            let mut d: Distribution = v.iter().enumerate().map(|(i, x)| (format!("{i:02b}"), x / s)).collect();
            *d.get_mut("00").unwrap() += 1e-3 / s;
            d
        };
        let (p, q) = (norm(&ps), norm(&qs));
        let f = hellinger_fidelity(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - hellinger_fidelity(&q, &p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cost_nonincreasing_in_fidelity(seed in any::<u64>(), bump in 0.0f64..0.05) {
        let g = random_connected_graph(5, 1.0, (0.9, 0.95), seed);
        let better = WeightedGraph { edges: g.edges.iter().map(|(&e, &w)| (e, w + bump)).collect(), ..g.clone() };
        let c = random_circuit(5, 20, seed);
        let k = 0.995;
        let lo = circuit_cost(&c, &backend_from_graph("b", &better), k).unwrap();
        let hi = circuit_cost(&c, &backend_from_graph("a", &g), k).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }
}
