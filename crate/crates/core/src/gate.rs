//! Built-in gate vocabulary and unitary matrices.
//!
//! Matrices use the little-endian operand convention: operand 0 is the least
//! significant bit of the matrix index. For `cx a, b` the control `a` is bit 0.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// Static description of a built-in gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateSpec {
    pub name: &'static str,
    pub num_qubits: usize,
    pub num_params: usize,
}

const fn g(name: &'static str, num_qubits: usize, num_params: usize) -> GateSpec {
    GateSpec { name, num_qubits, num_params }
}

pub const GATES: &[GateSpec] = &[
    g("id", 1, 0),
    g("x", 1, 0),
    g("y", 1, 0),
    g("z", 1, 0),
    g("h", 1, 0),
    g("s", 1, 0),
    g("sdg", 1, 0),
    g("t", 1, 0),
    g("tdg", 1, 0),
    g("rx", 1, 1),
    g("ry", 1, 1),
    g("rz", 1, 1),
    g("u1", 1, 1),
    g("u2", 1, 2),
    g("u3", 1, 3),
    g("cx", 2, 0),
    g("cz", 2, 0),
    g("cy", 2, 0),
    g("ch", 2, 0),
    g("swap", 2, 0),
    g("rxx", 2, 1),
    g("ryy", 2, 1),
    g("rzz", 2, 1),
    g("crx", 2, 1),
    g("cry", 2, 1),
    g("crz", 2, 1),
    g("cp", 2, 1),
    g("ccx", 3, 0),
    g("cswap", 3, 0),
];

pub fn lookup(name: &str) -> Option<&'static GateSpec> {
    GATES.iter().find(|s| s.name == name)
}

/// Gates that are their own inverse.
pub fn is_self_inverse(name: &str) -> bool {
    matches!(
        name,
        "id" | "x" | "y" | "z" | "h" | "cx" | "cz" | "cy" | "ch" | "swap" | "ccx" | "cswap"
    )
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cis(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

fn m2(a: C64, b: C64, cc: C64, d: C64) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

/// `|0><0| (x) I + |1><1| (x) u` with the control on operand 0.
fn controlled(u: &DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::identity(4, 4);
    // index = b0 + 2*b1; control b0 = 1 -> indices 1 and 3
    m[(1, 1)] = u[(0, 0)];
    m[(1, 3)] = u[(0, 1)];
    m[(3, 1)] = u[(1, 0)];
    m[(3, 3)] = u[(1, 1)];
    m
}

pub fn rx(t: f64) -> DMatrix<C64> {
    let (s, co) = (t / 2.0).sin_cos();
    m2(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
}

pub fn ry(t: f64) -> DMatrix<C64> {
    let (s, co) = (t / 2.0).sin_cos();
    m2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

pub fn rz(t: f64) -> DMatrix<C64> {
    m2(cis(-t / 2.0), c(0.0, 0.0), c(0.0, 0.0), cis(t / 2.0))
}

pub fn u3(theta: f64, phi: f64, lam: f64) -> DMatrix<C64> {
    let (s, co) = (theta / 2.0).sin_cos();
    m2(
        c(co, 0.0),
        -cis(lam) * s,
        cis(phi) * s,
        cis(phi + lam) * co,
    )
}

fn two_qubit_pauli_rotation(p: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    // exp(-i t/2 P(x)P) = cos(t/2) I - i sin(t/2) P(x)P
    let pp = p.kronecker(p);
    let (s, co) = (t / 2.0).sin_cos();
    DMatrix::<C64>::identity(4, 4) * c(co, 0.0) - pp * c(0.0, s)
}

/// Unitary of a built-in gate with literal parameters.
///
/// Returns `None` for unknown names or wrong parameter counts.
pub fn matrix(name: &str, params: &[f64]) -> Option<DMatrix<C64>> {
    let spec = lookup(name)?;
    if spec.num_params != params.len() {
        return None;
    }
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let h = FRAC_1_SQRT_2;
    let px = m2(z, o, o, z);
    let py = m2(z, c(0.0, -1.0), c(0.0, 1.0), z);
    let pz = m2(o, z, z, -o);
    let m = match name {
        "id" => DMatrix::identity(2, 2),
        "x" => px,
        "y" => py,
        "z" => pz,
        "h" => m2(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)),
        "s" => m2(o, z, z, c(0.0, 1.0)),
        "sdg" => m2(o, z, z, c(0.0, -1.0)),
        "t" => m2(o, z, z, cis(PI / 4.0)),
        "tdg" => m2(o, z, z, cis(-PI / 4.0)),
        "rx" => rx(params[0]),
        "ry" => ry(params[0]),
        "rz" => rz(params[0]),
        "u1" => m2(o, z, z, cis(params[0])),
        "u2" => u3(PI / 2.0, params[0], params[1]),
        "u3" => u3(params[0], params[1], params[2]),
        "cx" => controlled(&px),
        "cy" => controlled(&py),
        "cz" => controlled(&pz),
        "ch" => controlled(&matrix("h", &[])?),
        "crx" => controlled(&rx(params[0])),
        "cry" => controlled(&ry(params[0])),
        "crz" => controlled(&rz(params[0])),
        "cp" => controlled(&m2(o, z, z, cis(params[0]))),
        "swap" => {
            let mut m = DMatrix::<C64>::zeros(4, 4);
            m[(0, 0)] = o;
            m[(1, 2)] = o;
            m[(2, 1)] = o;
            m[(3, 3)] = o;
            m
        }
        "rxx" => two_qubit_pauli_rotation(&px, params[0]),
        "ryy" => two_qubit_pauli_rotation(&py, params[0]),
        "rzz" => two_qubit_pauli_rotation(&pz, params[0]),
        "ccx" => {
            // controls on bits 0 and 1, target bit 2: swap |011> and |111>
            let mut m = DMatrix::<C64>::identity(8, 8);
            m[(3, 3)] = z;
            m[(7, 7)] = z;
            m[(3, 7)] = o;
            m[(7, 3)] = o;
            m
        }
        "cswap" => {
            // control bit 0; swap bits 1 and 2: |011> (3) <-> |101> (5)
            let mut m = DMatrix::<C64>::identity(8, 8);
            m[(3, 3)] = z;
            m[(5, 5)] = z;
            m[(3, 5)] = o;
            m[(5, 3)] = o;
            m
        }
        _ => return None,
    };
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &DMatrix<C64>) -> bool {
        let n = m.nrows();
        let p = m.adjoint() * m;
        (p - DMatrix::<C64>::identity(n, n)).norm() < 1e-12
    }

    #[test]
    fn every_gate_is_unitary() {
        for spec in GATES {
            let params: Vec<f64> = (0..spec.num_params).map(|i| 0.37 + i as f64).collect();
            let m = matrix(spec.name, &params).unwrap();
            assert_eq!(m.nrows(), 1 << spec.num_qubits, "{}", spec.name);
            assert!(is_unitary(&m), "{}", spec.name);
        }
    }

    #[test]
    fn cx_control_is_operand_zero() {
        let m = matrix("cx", &[]).unwrap();
        // |b1 b0> = |01> (control set) -> |11>
        assert_eq!(m[(3, 1)], c(1.0, 0.0));
        assert_eq!(m[(2, 2)], c(1.0, 0.0));
    }

    #[test]
    fn wrong_param_count_rejected() {
        assert!(matrix("rz", &[]).is_none());
        assert!(matrix("nope", &[]).is_none());
    }
}
