//! Seeded generators for circuits, device graphs and unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Instruction};
use crate::graph::WeightedGraph;
use crate::transpiler::Backend;

/// Gate alphabet of the random benchmark circuits.
pub const BENCH_GATES: [&str; 8] = ["cz", "cx", "rxx", "rx", "ry", "rz", "s", "t"];

/// `gates` random gates over `n` qubits, no measurements. Two-qubit gates
/// are skipped when `n < 2`.
pub fn random_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n, 0);
    let pool: Vec<&str> = BENCH_GATES.iter().copied().filter(|g| n >= 2 || !matches!(*g, "cz" | "cx" | "rxx")).collect();
    for _ in 0..gates {
        let name = *pool.choose(&mut rng).unwrap();
        let instr = match name {
            "cz" | "cx" | "rxx" => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let params = if name == "rxx" { vec![rng.gen_range(-3.0..3.0)] } else { vec![] };
                Instruction::gate_f(name, &[a, b], &params)
            }
            "rx" | "ry" | "rz" => {
                let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                Instruction::gate_f(name, &[rng.gen_range(0..n)], &[theta])
            }
            _ => Instruction::gate_f(name, &[rng.gen_range(0..n)], &[]),
        };
        c.push(instr);
    }
    c
}

/// Connected graph on `n` nodes: a random spanning tree plus each other
/// pair with probability `extra`. Edge weights are uniform in `fid`.
pub fn random_connected_graph(n: usize, extra: f64, fid: (f64, f64), seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let draw = |rng: &mut ChaCha8Rng| if fid.0 < fid.1 { rng.gen_range(fid.0..=fid.1) } else { fid.0 };
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let w = draw(&mut rng);
        g.add_edge(order[i], parent, w);
    }
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) && rng.gen_bool(extra) {
                let w = draw(&mut rng);
                g.add_edge(a, b, w);
            }
        }
    }
    g
}

/// Backend with the default basis over a graph's edges.
pub fn backend_from_graph(name: &str, g: &WeightedGraph) -> Backend {
    let coupling = g.edges.iter().map(|(&(a, b), &w)| (a, b, w)).collect();
    Backend::new(name, g.num_nodes(), coupling, &[])
}

/// Rows x cols grid with edge fidelities uniform in `fid`.
pub fn lattice_graph(rows: usize, cols: usize, fid: (f64, f64), seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if c + 1 < cols {
                g.add_edge(q, q + 1, rng.gen_range(fid.0..=fid.1));
            }
            if r + 1 < rows {
                g.add_edge(q, q + cols, rng.gen_range(fid.0..=fid.1));
            }
        }
    }
    g
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-random unitary of dimension `dim` (QR of a complex Ginibre
/// matrix with the phases of R's diagonal divided out).
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar unitary scaled to determinant one.
pub fn haar_special_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let u = haar_unitary(dim, rng);
    let det = u.determinant();
    let scale = Complex64::from_polar(1.0, -det.arg() / dim as f64);
    u * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let a = random_circuit(5, 30, 3);
        assert_eq!(a, random_circuit(5, 30, 3));
        assert_eq!(a.gate_count(), 30);
        assert!(a.instructions.iter().all(|i| BENCH_GATES.contains(&i.name.as_str())));
        assert!(random_circuit(1, 10, 1).instructions.iter().all(|i| i.qubits.len() == 1));

        for s in 0..20 {
            let g = random_connected_graph(8, 0.2, (0.9, 0.99), s);
            assert!(g.is_connected());
            assert!(g.num_edges() >= 7);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_special_unitary(4, &mut rng);
        let eye = DMatrix::<Complex64>::identity(4, 4);
        assert!((u.adjoint() * &u - eye).norm() < 1e-12);
        assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
