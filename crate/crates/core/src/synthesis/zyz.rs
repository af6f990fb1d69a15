use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::Instruction;
use crate::param::canonical_angle;

const EPS: f64 = 1e-10;

/// Angles `(theta, phi, lambda)` with `u = e^{ia} Rz(phi) Ry(theta) Rz(lambda)`.
pub fn zyz_angles(u: &DMatrix<Complex64>) -> (f64, f64, f64) {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let v = u.map(|x| x / det.sqrt());
    let theta = 2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm());
    let sum = if v[(1, 1)].norm() > EPS { 2.0 * v[(1, 1)].arg() } else { 0.0 };
    let diff = if v[(1, 0)].norm() > EPS { 2.0 * v[(1, 0)].arg() } else { 0.0 };
    (theta, (sum + diff) / 2.0, (sum - diff) / 2.0)
}

/// Rotation sequence for `u` on qubit `q`, in circuit order. Negligible
/// rotations are omitted, so the identity yields an empty sequence.
pub fn synth_1q(u: &DMatrix<Complex64>, q: usize) -> Vec<Instruction> {
    let (theta, phi, lam) = zyz_angles(u);
    let theta = canonical_angle(theta);
    let mut out = Vec::with_capacity(3);
    if theta.abs() < EPS {
        let z = canonical_angle(phi + lam);
        if z.abs() >= EPS {
            out.push(Instruction::gate_f("rz", &[q], &[z]));
        }
        return out;
    }
    for (name, a) in [("rz", lam), ("ry", theta), ("rz", phi)] {
        let a = canonical_angle(a);
        if a.abs() >= EPS {
            out.push(Instruction::gate_f(name, &[q], &[a]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate;
    use crate::synthesis::phase_distance;

    fn product(seq: &[Instruction]) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(2, 2);
        for i in seq {
            m = gate::matrix(&i.name, &i.literal_params().unwrap()).unwrap() * m;
        }
        m
    }

    #[test]
    fn named_gates_round_trip() {
        for (name, p) in [("h", vec![]), ("x", vec![]), ("y", vec![]), ("t", vec![]), ("u3", vec![0.3, -1.2, 2.9])] {
            let u = gate::matrix(name, &p).unwrap();
            assert!(phase_distance(&product(&synth_1q(&u, 0)), &u) < 1e-9, "{name}");
        }
        assert!(synth_1q(&DMatrix::identity(2, 2), 0).is_empty());
        assert_eq!(synth_1q(&gate::rz(0.4), 0).len(), 1);
    }
}
