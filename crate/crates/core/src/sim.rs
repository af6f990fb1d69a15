//! Dense statevector simulation, used for equivalence checks.
//!
//! Qubit 0 is the least significant bit of the basis index. A k-qubit gate
//! matrix indexes its operands the same way: operand 0 is the low bit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::circuit::{Circuit, InstrKind};
use crate::gate;

pub type StateVector = DVector<Complex64>;

/// Largest register the simulator accepts.
pub const MAX_SIM_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("too many qubits to simulate: {0} (limit {MAX_SIM_QUBITS})")]
    TooLarge(usize),
    #[error("cannot simulate gate '{0}'")]
    UnknownGate(String),
    #[error("unbound parameter in gate '{0}'")]
    Unbound(String),
}

pub fn zero_state(n: usize) -> StateVector {
    let mut v = DVector::from_element(1 << n, Complex64::new(0.0, 0.0));
    v[0] = Complex64::new(1.0, 0.0);
    v
}

/// Applies `m` (dimension 2^k) to `qubits` of `state`.
pub fn apply_matrix(state: &mut StateVector, m: &DMatrix<Complex64>, qubits: &[usize]) {
    let k = qubits.len();
    let dim = 1usize << k;
    assert_eq!(m.nrows(), dim);
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let offsets: Vec<usize> = (0..dim)
        .map(|j| qubits.iter().enumerate().filter(|(b, _)| j >> b & 1 == 1).map(|(_, &q)| 1 << q).sum())
        .collect();
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    for base in 0..state.len() {
        if base & mask != 0 {
            continue;
        }
        for j in 0..dim {
            amp[j] = state[base | offsets[j]];
        }
        for i in 0..dim {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                s += m[(i, j)] * amp[j];
            }
            state[base | offsets[i]] = s;
        }
    }
}

/// Runs the unitary part of `c` on `state`. Barriers and measures are
/// skipped.
pub fn run(c: &Circuit, state: &mut StateVector) -> Result<(), SimError> {
    for instr in c.instructions.iter().filter(|i| i.kind == InstrKind::Gate) {
        let params = instr.literal_params().ok_or_else(|| SimError::Unbound(instr.name.clone()))?;
        let m = gate::matrix(&instr.name, &params).ok_or_else(|| SimError::UnknownGate(instr.name.clone()))?;
        apply_matrix(state, &m, &instr.qubits);
    }
    Ok(())
}

/// Final state of `c` started from |0...0>.
pub fn simulate(c: &Circuit) -> Result<StateVector, SimError> {
    let n = c.num_qubits();
    if n > MAX_SIM_QUBITS {
        return Err(SimError::TooLarge(n));
    }
    let mut s = zero_state(n);
    run(c, &mut s)?;
    Ok(s)
}

/// Full unitary of `c` (column j is the image of basis state j).
pub fn unitary(c: &Circuit) -> Result<DMatrix<Complex64>, SimError> {
    let n = c.num_qubits();
    if n > 10 {
        return Err(SimError::TooLarge(n));
    }
    let dim = 1 << n;
    let mut u = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for j in 0..dim {
        let mut s = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        s[j] = Complex64::new(1.0, 0.0);
        run(c, &mut s)?;
        u.set_column(j, &s);
    }
    Ok(u)
}

/// |<a|b>|.
pub fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    a.dotc(b).norm()
}

/// Ideal measurement distribution over `clbits` classical bits.
pub fn probabilities(c: &Circuit) -> Result<std::collections::BTreeMap<usize, f64>, SimError> {
    let s = simulate(c)?;
    let measures: Vec<(usize, usize)> = c
        .instructions
        .iter()
        .filter(|i| i.kind == InstrKind::Measure)
        .map(|i| (i.qubits[0], i.clbits[0]))
        .collect();
    let mut out = std::collections::BTreeMap::new();
    for (idx, a) in s.iter().enumerate() {
        let p = a.norm_sqr();
        if p < 1e-15 {
            continue;
        }
        let mut key = 0usize;
        for &(q, cb) in &measures {
            if idx >> q & 1 == 1 {
                key |= 1 << cb;
            }
        }
        *out.entry(key).or_insert(0.0) += p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    #[test]
    fn bell_state() {
        let c = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        let s = simulate(&c).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s[0].re - r).abs() < 1e-12 && (s[3].re - r).abs() < 1e-12);
        assert!(s[1].norm() < 1e-12 && s[2].norm() < 1e-12);
    }

    #[test]
    fn cx_control_is_first_operand() {
        let c = parse_qasm("qreg q[3]; x q[2]; cx q[2],q[0];").unwrap();
        let s = simulate(&c).unwrap();
        assert!((s[0b101].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_follow_clbits() {
        let c = parse_qasm("qreg q[2]; creg c[2]; x q[0]; measure q[0] -> c[1]; measure q[1] -> c[0];").unwrap();
        let p = probabilities(&c).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[&0b10] - 1.0).abs() < 1e-12);
    }
}
