//! Exact synthesis of one- and two-qubit unitaries into rotations and CNOTs.

mod kak;
mod zyz;

pub use kak::{decompose_two_qubit, TwoQubitDecomposition};
pub use zyz::{synth_1q, zyz_angles};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `max |a - e^{iφ} b|` minimized over the global phase φ.
pub fn phase_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let tr = (b.adjoint() * a).trace();
    let ph = if tr.norm() > 1e-300 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    (a - b.map(|x| x * ph)).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Frobenius norm of `a - e^{iφ} b` minimized over the global phase φ.
pub fn phase_frobenius_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let tr = (b.adjoint() * a).trace();
    let ph = if tr.norm() > 1e-300 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    (a - b.map(|x| x * ph)).norm()
}
