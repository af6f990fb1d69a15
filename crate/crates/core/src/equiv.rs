//! Statevector equivalence of a compiled circuit against its source, up to
//! the qubit permutations introduced by layout and routing.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, InstrKind};
use crate::mapping::Layout;
use crate::sim::{self, SimError, StateVector, MAX_SIM_QUBITS};

/// Number of random input states tried besides |0...0>.
pub const RANDOM_INPUTS: usize = 4;

/// Places a logical state into the physical register: logical qubit `l`
/// lands on `layout.phys(l)`, every other physical qubit is |0>.
pub fn embed(state: &StateVector, layout: &Layout) -> StateVector {
    let mut out = StateVector::from_element(1 << layout.num_physical(), Complex64::new(0.0, 0.0));
    for (idx, &a) in state.iter().enumerate() {
        let mut p = 0usize;
        for l in 0..layout.num_logical() {
            if idx >> l & 1 == 1 {
                p |= 1 << layout.phys(l);
            }
        }
        out[p] = a;
    }
    out
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let v = StateVector::from_fn(1 << n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

fn measures(c: &Circuit) -> Vec<(usize, usize)> {
    let mut m: Vec<(usize, usize)> = c
        .instructions
        .iter()
        .filter(|i| i.kind == InstrKind::Measure)
        .map(|i| (i.clbits[0], i.qubits[0]))
        .collect();
    m.sort_unstable();
    m
}

/// True if, for |0...0> and a few seeded random inputs, running `compiled`
/// on the input embedded through `initial` matches the output of `original`
/// embedded through `final_` with fidelity at least `1 - tol`. Measurements
/// must read the same logical qubits into the same classical bits.
pub fn equivalent_up_to_layout(
    original: &Circuit,
    compiled: &Circuit,
    initial: &Layout,
    final_: &Layout,
    tol: f64,
) -> Result<bool, SimError> {
    let n = original.num_qubits();
    let big = compiled.num_qubits();
    if big > MAX_SIM_QUBITS {
        return Err(SimError::TooLarge(big));
    }
    if initial.num_logical() != n || final_.num_logical() != n || initial.num_physical() != big || final_.num_physical() != big {
        return Ok(false);
    }
    let expected: Vec<(usize, usize)> = measures(original).into_iter().map(|(cb, q)| (cb, final_.phys(q))).collect();
    if measures(compiled) != expected {
        return Ok(false);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut inputs = vec![sim::zero_state(n)];
    inputs.extend((0..RANDOM_INPUTS).map(|_| random_state(n, &mut rng)));
    for psi in inputs {
        let mut want = psi.clone();
        sim::run(original, &mut want)?;
        let want = embed(&want, final_);
        let mut got = embed(&psi, initial);
        sim::run(compiled, &mut got)?;
        if sim::overlap(&want, &got) < 1.0 - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    #[test]
    fn swap_tracking() {
        let orig = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1]; t q[1];").unwrap();
        // logical 0 -> physical 1 initially, swapped before the t
        let comp = parse_qasm("qreg q[3]; h q[1]; cx q[1],q[0]; swap q[0],q[2]; t q[2];").unwrap();
        let init = Layout::new(vec![1, 0], 3).unwrap();
        let fin = Layout::new(vec![1, 2], 3).unwrap();
        assert!(equivalent_up_to_layout(&orig, &comp, &init, &fin, 1e-9).unwrap());
        assert!(!equivalent_up_to_layout(&orig, &comp, &init, &init, 1e-9).unwrap());
    }

    #[test]
    fn global_phase_is_ignored_but_relative_phase_is_not() {
        let orig = parse_qasm("qreg q[1]; z q[0];").unwrap();
        let l = Layout::trivial(1, 1);
        let phased = parse_qasm("qreg q[1]; rz(pi) q[0];").unwrap();
        assert!(equivalent_up_to_layout(&orig, &phased, &l, &l, 1e-9).unwrap());
        let wrong = parse_qasm("qreg q[1]; s q[0];").unwrap();
        assert!(!equivalent_up_to_layout(&orig, &wrong, &l, &l, 1e-6).unwrap());
    }
}
