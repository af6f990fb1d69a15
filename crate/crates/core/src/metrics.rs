//! Evaluation metrics: Hellinger fidelity and the circuit cost function.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::Circuit;
use crate::transpiler::Backend;

pub type Distribution = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("penalty factor must lie in (0, 1], got {0}")]
    Penalty(f64),
    #[error("gate {0} on ({1}, {2}) has no calibrated coupling")]
    MissingEdge(String, usize, usize),
    #[error("gate {0} acts on more than two qubits")]
    WideGate(String),
}

fn check_distribution(p: &Distribution) -> Result<(), MetricError> {
    if let Some((k, v)) = p.iter().find(|(_, &v)| v.is_nan() || v < 0.0) {
        return Err(MetricError::Distribution(format!("p({k}) = {v}")));
    }
    let s: f64 = p.values().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(MetricError::Distribution(format!("probabilities sum to {s}")));
    }
    Ok(())
}

/// `F_H = (1 - d_H^2)^2` with `d_H^2 = 1 - sum sqrt(p q)`. Missing keys
/// count as probability zero.
pub fn hellinger_fidelity(p_exp: &Distribution, p_ideal: &Distribution) -> Result<f64, MetricError> {
    check_distribution(p_exp)?;
    check_distribution(p_ideal)?;
    let widths: BTreeSet<usize> = p_exp.keys().chain(p_ideal.keys()).map(String::len).collect();
    if widths.len() > 1 {
        return Err(MetricError::Distribution("bitstrings of different widths".into()));
    }
    let bc: f64 = p_exp.iter().map(|(k, &p)| (p * p_ideal.get(k).copied().unwrap_or(0.0)).sqrt()).sum();
    let d2 = (1.0 - bc).max(0.0);
    Ok(((1.0 - d2).powi(2)).clamp(0.0, 1.0))
}

/// `C = -D ln K - sum ln F1q - sum ln F2q`. Every single-qubit gate uses the
/// backend's average single-qubit fidelity; two-qubit gates use the fidelity
/// of the coupling they run on.
pub fn circuit_cost(c: &Circuit, b: &Backend, k: f64) -> Result<f64, MetricError> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(MetricError::Penalty(k));
    }
    let f1 = b.average_1q_fidelity();
    let mut cost = -(c.depth() as f64) * k.ln();
    for i in c.instructions.iter().filter(|i| i.is_gate()) {
        match i.qubits[..] {
            [_] => cost -= f1.ln(),
            [a, q] => {
                let f = b.edge_fidelity(a, q).ok_or_else(|| MetricError::MissingEdge(i.name.clone(), a, q))?;
                cost -= f.ln();
            }
            _ => return Err(MetricError::WideGate(i.name.clone())),
        }
    }
    Ok(cost)
}

/// Distribution keyed by bitstrings of width `width`, clbit 0 rightmost.
pub fn bitstring_distribution(p: &BTreeMap<usize, f64>, width: usize) -> Distribution {
    p.iter().map(|(&k, &v)| (format!("{k:0width$b}"), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn dist(entries: &[(&str, f64)]) -> Distribution {
        entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn hellinger_fixtures() {
        let half = dist(&[("0", 0.5), ("1", 0.5)]);
        let zero = dist(&[("0", 1.0)]);
        let one = dist(&[("1", 1.0)]);
        assert!((hellinger_fidelity(&half, &zero).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(hellinger_fidelity(&half, &half).unwrap(), 1.0);
        assert_eq!(hellinger_fidelity(&zero, &one).unwrap(), 0.0);
        assert!(hellinger_fidelity(&dist(&[("0", 0.7)]), &zero).is_err());
        assert!(hellinger_fidelity(&dist(&[("00", 1.0)]), &zero).is_err());
    }

    #[test]
    fn cost_fixture() {
        let b = Backend::new("pair", 2, vec![(0, 1, 0.99)], &[]);
        let c = parse_qasm("qreg q[2]; cz q[0],q[1];").unwrap();
        let cost = circuit_cost(&c, &b, 0.995).unwrap();
        assert!((cost - (-(0.995f64).ln() - (0.99f64).ln())).abs() < 1e-15);
        assert!((cost - 0.015063).abs() < 1e-6);
        assert_eq!(circuit_cost(&Circuit::new(2, 0), &b, 0.995).unwrap(), 0.0);
        assert!(circuit_cost(&c, &b, 0.0).is_err());
    }

    #[test]
    fn bitstrings_pad_to_width() {
        let d = bitstring_distribution(&BTreeMap::from([(1, 0.25), (2, 0.75)]), 3);
        assert_eq!(d, dist(&[("001", 0.25), ("010", 0.75)]));
    }
}
