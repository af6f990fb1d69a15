//! Two-qubit synthesis through the magic-basis (KAK) decomposition.
//!
//! A unitary is matched against templates with 0, 1, 2 and 3 CNOTs; the
//! first template that is locally equivalent to it is used, and the local
//! parts are recovered by aligning the two decompositions.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{phase_distance, synth_1q};
use crate::circuit::Instruction;
use crate::gate;

type CMat = DMatrix<Complex64>;
type RMat = DMatrix<f64>;

const TOL: f64 = 1e-7;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn magic() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, s),
            c(0.0, 0.0), c(0.0, s), c(s, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, s), c(-s, 0.0), c(0.0, 0.0),
            c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -s),
        ],
    )
}

fn det4(u: &CMat) -> Complex64 {
    u.clone().determinant()
}

fn to_su4(u: &CMat) -> CMat {
    let d = det4(u);
    let f = d.powf(0.25);
    u.map(|x| x / f)
}

fn complexify(r: &RMat) -> CMat {
    r.map(|x| c(x, 0.0))
}

/// `u_b = o1 * diag(d) * o2` with `o1, o2` in SO(4), for `u_b` in the magic
/// basis of an SU(4) element.
struct Kak {
    o1: RMat,
    d: Vec<Complex64>,
    o2: RMat,
}

fn kak(u_b: &CMat) -> Kak {
    let m2 = u_b.transpose() * u_b;
    let re = m2.map(|x| x.re);
    let im = m2.map(|x| x.im);
    let mut best: Option<(f64, RMat)> = None;
    for t in [0.0, 0.618_033_988_7, -1.324_717_957, 2.9, 1e3] {
        let x = if t == 1e3 { im.clone() } else { &re + &im * t };
        let x = (&x + x.transpose()) * 0.5;
        let eig = SymmetricEigen::new(x);
        let o2 = eig.eigenvectors.transpose();
        let diag = complexify(&o2) * &m2 * complexify(&o2.transpose());
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| diag[(i, j)].norm())
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(e, _)| off < *e) {
            best = Some((off, o2));
        }
        if off < 1e-12 {
            break;
        }
    }
    let mut o2 = best.unwrap().1;
    if o2.determinant() < 0.0 {
        for j in 0..4 {
            o2[(0, j)] = -o2[(0, j)];
        }
    }
    let diag = complexify(&o2) * &m2 * complexify(&o2.transpose());
    let mut d: Vec<Complex64> = (0..4).map(|i| diag[(i, i)].sqrt()).collect();
    let mut dinv = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 / d[i] } else { c(0.0, 0.0) });
    let mut o1 = (u_b * complexify(&o2.transpose()) * &dinv).map(|x| x.re);
    if o1.determinant() < 0.0 {
        d[0] = -d[0];
        dinv[(0, 0)] = -dinv[(0, 0)];
        o1 = (u_b * complexify(&o2.transpose()) * &dinv).map(|x| x.re);
    }
    Kak { o1, d, o2 }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let p = [a, b, cc, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&x| seen[x] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Finds local unitaries with `u ≅ kl * v * kr` (equality up to phase).
/// Returns `(kl, kr)` in the computational basis.
fn align_local(u: &CMat, v: &CMat) -> Option<(CMat, CMat)> {
    let m = magic();
    let md = m.adjoint();
    let u_su = to_su4(u);
    let ku = kak(&(&md * &u_su * &m));
    let v_su = to_su4(v);
    for k in 0..4 {
        let ph = c(0.0, 1.0).powu(k);
        let vk = v_su.map(|x| x * ph);
        let v_b = &md * &vk * &m;
        let kv = kak(&v_b);
        for sigma in permutations4() {
            let err = (0..4).map(|i| (ku.d[i] * ku.d[i] - kv.d[sigma[i]] * kv.d[sigma[i]]).norm()).fold(0.0, f64::max);
            if err > 1e-6 {
                continue;
            }
            let signs: Vec<f64> = (0..4).map(|i| if (ku.d[i] - kv.d[sigma[i]]).norm() < (ku.d[i] + kv.d[sigma[i]]).norm() { 1.0 } else { -1.0 }).collect();
            if signs.iter().product::<f64>() < 0.0 {
                continue;
            }
            let mut pi = RMat::zeros(4, 4);
            for i in 0..4 {
                pi[(i, sigma[i])] = 1.0;
            }
            if pi.determinant() < 0.0 {
                for i in 0..4 {
                    pi[(i, 0)] = -pi[(i, 0)];
                }
            }
            let s = RMat::from_diagonal(&nalgebra::DVector::from_vec(signs));
            let l = &ku.o1 * &pi * kv.o1.transpose();
            let r = kv.o2.transpose() * pi.transpose() * &s * &ku.o2;
            let kl = &m * complexify(&l) * &md;
            let kr = &m * complexify(&r) * &md;
            if phase_distance(&(&kl * &vk * &kr), u) < TOL {
                return Some((kl, kr));
            }
        }
    }
    None
}

/// Splits a local unitary into `(a0, a1)` with `k = a1 ⊗ a0` up to phase,
/// `a0` acting on qubit 0.
fn factor_local(k: &CMat) -> (CMat, CMat) {
    let mut best = (0, 0, -1.0);
    for r in 0..2 {
        for s in 0..2 {
            let n = k.view((2 * r, 2 * s), (2, 2)).iter().map(|x| x.norm_sqr()).sum::<f64>();
            if n > best.2 {
                best = (r, s, n);
            }
        }
    }
    let blk: CMat = k.view((2 * best.0, 2 * best.1), (2, 2)).into_owned();
    let det = blk[(0, 0)] * blk[(1, 1)] - blk[(0, 1)] * blk[(1, 0)];
    let a0 = blk.map(|x| x / det.sqrt());
    let a1 = DMatrix::from_fn(2, 2, |r, s| {
        let b: CMat = k.view((2 * r, 2 * s), (2, 2)).into_owned();
        (a0.adjoint() * b).trace() / 2.0
    });
    (a0, a1)
}

fn kron_q1_q0(a1: &CMat, a0: &CMat) -> CMat {
    a1.kronecker(a0)
}

fn mat(instrs: &[Instruction]) -> CMat {
    let mut u = CMat::identity(4, 4);
    for i in instrs {
        let g = gate::matrix(&i.name, &i.literal_params().unwrap()).unwrap();
        let full = match (i.qubits.as_slice(), g.nrows()) {
            ([0], 2) => kron_q1_q0(&CMat::identity(2, 2), &g),
            ([1], 2) => kron_q1_q0(&g, &CMat::identity(2, 2)),
            ([0, 1], 4) => g,
            ([1, 0], 4) => {
                let sw = gate::matrix("swap", &[]).unwrap();
                &sw * g * &sw
            }
            _ => unreachable!(),
        };
        u = full * u;
    }
    u
}

/// Result of two-qubit synthesis on local operands 0 and 1.
#[derive(Debug, Clone)]
pub struct TwoQubitDecomposition {
    pub num_cx: usize,
    /// Gates on operands `0` and `1`, in circuit order.
    pub gates: Vec<Instruction>,
}

impl TwoQubitDecomposition {
    /// The same gates on physical qubits `(a, b)`.
    pub fn on(&self, a: usize, b: usize) -> Vec<Instruction> {
        self.gates
            .iter()
            .map(|i| {
                let mut i = i.clone();
                i.qubits = i.qubits.iter().map(|&q| if q == 0 { a } else { b }).collect();
                i
            })
            .collect()
    }
}

fn spectrum_phases(u: &CMat) -> Vec<Vec<f64>> {
    let m = magic();
    let u_b = m.adjoint() * to_su4(u) * &m;
    let d = kak(&u_b).d;
    // two global-phase branches: U and iU square to opposite spectra
    [1.0, -1.0].iter().map(|s| d.iter().map(|x| (x * x * *s).arg()).collect()).collect()
}

fn templates(u: &CMat) -> Vec<(usize, Vec<Instruction>)> {
    let cx01 = Instruction::gate_f("cx", &[0, 1], &[]);
    let cx10 = Instruction::gate_f("cx", &[1, 0], &[]);
    let mut out = vec![(0, vec![]), (1, vec![cx01.clone()])];
    for phases in spectrum_phases(u) {
        for pairing in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
            let (p0, p1, p2, p3) = (phases[pairing[0]], phases[pairing[1]], phases[pairing[2]], phases[pairing[3]]);
            let closed = |x: f64, y: f64| ((x + y + PI).rem_euclid(2.0 * PI) - PI).abs() < 1e-6;
            if closed(p0, p1) && closed(p2, p3) {
                let (phi, psi) = (p0, p2);
                let a = (phi - psi) / 4.0;
                let cc = (phi + psi) / 4.0;
                out.push((
                    2,
                    vec![
                        cx01.clone(),
                        Instruction::gate_f("rx", &[0], &[-2.0 * a]),
                        Instruction::gate_f("rz", &[1], &[-2.0 * cc]),
                        cx01.clone(),
                    ],
                ));
            }
        }
    }
    for phases in spectrum_phases(u) {
        let l: Vec<f64> = phases.iter().map(|p| p / 2.0).collect();
        let a = (l[0] + l[2]) / 2.0;
        let b = (l[1] + l[2]) / 2.0;
        let cc = (l[0] + l[1]) / 2.0;
        out.push((
            3,
            vec![
                cx10.clone(),
                Instruction::gate_f("ry", &[1], &[FRAC_PI_2 - 2.0 * b]),
                cx01.clone(),
                Instruction::gate_f("rz", &[0], &[FRAC_PI_2 - 2.0 * cc]),
                Instruction::gate_f("ry", &[1], &[2.0 * a - FRAC_PI_2]),
                cx10.clone(),
            ],
        ));
    }
    out
}

/// Decomposes a 4x4 unitary (operand 0 = low bit) into `cx`, `rz` and `ry`
/// gates on operands 0 and 1, using as few CNOTs as the templates allow.
pub fn decompose_two_qubit(u: &CMat) -> Option<TwoQubitDecomposition> {
    for (num_cx, core) in templates(u) {
        let v = mat(&core);
        let Some((kl, kr)) = align_local(u, &v) else { continue };
        let (r0, r1) = factor_local(&kr);
        let (l0, l1) = factor_local(&kl);
        let mut gates = synth_1q(&r0, 0);
        gates.extend(synth_1q(&r1, 1));
        gates.extend(core);
        gates.extend(synth_1q(&l0, 0));
        gates.extend(synth_1q(&l1, 1));
        if phase_distance(&mat(&gates), u) < 1e-6 {
            return Some(TwoQubitDecomposition { num_cx, gates });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_su2(rng: &mut ChaCha8Rng) -> CMat {
        gate::u3(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI))
    }

    fn random_u4(rng: &mut ChaCha8Rng) -> CMat {
        // Haar-like unitary via QR of a Gaussian matrix
        let g = CMat::from_fn(4, 4, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        g.qr().q()
    }

    fn check(u: &CMat, max_cx: usize) {
        let d = decompose_two_qubit(u).expect("decomposition");
        assert!(d.num_cx <= max_cx, "used {} cx, expected <= {max_cx}", d.num_cx);
        assert!(phase_distance(&mat(&d.gates), u) < 1e-6);
    }

    #[test]
    fn random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            check(&random_u4(&mut rng), 3);
        }
    }

    #[test]
    fn cnot_counts_are_minimal_for_known_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let l = kron_q1_q0(&random_su2(&mut rng), &random_su2(&mut rng));
            let r = kron_q1_q0(&random_su2(&mut rng), &random_su2(&mut rng));
            check(&(&l * &r), 0);
            let cx = gate::matrix("cx", &[]).unwrap();
            check(&(&l * &cx * &r), 1);
            let t: f64 = rng.gen_range(-PI..PI);
            let rzz = gate::matrix("rzz", &[t]).unwrap();
            let rxx = gate::matrix("rxx", &[rng.gen_range(-PI..PI)]).unwrap();
            check(&(&l * &rzz * &rxx * &r), 2);
            check(&(&l * &rzz * &r), 2);
        }
        check(&gate::matrix("swap", &[]).unwrap(), 3);
        check(&gate::matrix("cz", &[]).unwrap(), 1);
        check(&gate::matrix("ch", &[]).unwrap(), 1);
        check(&gate::matrix("cp", &[0.7]).unwrap(), 2);
    }
}
