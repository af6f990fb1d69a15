//! Rewrite rules towards two-qubit gates and towards a basis gate set.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::circuit::Instruction;
use crate::gate;
use crate::param::ParamExpr;
use crate::synthesis::{decompose_two_qubit, synth_1q};

fn g(name: &str, qubits: &[usize], params: Vec<ParamExpr>) -> Instruction {
    Instruction::gate(name, qubits, params)
}

fn n(v: f64) -> ParamExpr {
    ParamExpr::Num(v)
}

fn ccx_rule(a: usize, b: usize, c: usize) -> Vec<Instruction> {
    vec![
        g("h", &[c], vec![]),
        g("cx", &[b, c], vec![]),
        g("tdg", &[c], vec![]),
        g("cx", &[a, c], vec![]),
        g("t", &[c], vec![]),
        g("cx", &[b, c], vec![]),
        g("tdg", &[c], vec![]),
        g("cx", &[a, c], vec![]),
        g("t", &[b], vec![]),
        g("t", &[c], vec![]),
        g("h", &[c], vec![]),
        g("cx", &[a, b], vec![]),
        g("t", &[a], vec![]),
        g("tdg", &[b], vec![]),
        g("cx", &[a, b], vec![]),
    ]
}

/// Identity-based expansion of a single gate, if a rule exists.
/// `prefer_cz` selects the entangler used by the rules.
fn rule(i: &Instruction, prefer_cz: bool) -> Option<Vec<Instruction>> {
    let q = &i.qubits;
    let p = &i.params;
    let out = match i.name.as_str() {
        "ccx" => ccx_rule(q[0], q[1], q[2]),
        "cswap" => vec![g("cx", &[q[2], q[1]], vec![]), g("ccx", &[q[0], q[1], q[2]], vec![]), g("cx", &[q[2], q[1]], vec![])],
        "id" => vec![],
        "x" => vec![g("rx", q, vec![n(PI)])],
        "y" => vec![g("ry", q, vec![n(PI)])],
        "z" => vec![g("rz", q, vec![n(PI)])],
        "s" => vec![g("rz", q, vec![n(FRAC_PI_2)])],
        "sdg" => vec![g("rz", q, vec![n(-FRAC_PI_2)])],
        "t" => vec![g("rz", q, vec![n(FRAC_PI_4)])],
        "tdg" => vec![g("rz", q, vec![n(-FRAC_PI_4)])],
        "h" => vec![g("rz", q, vec![n(PI)]), g("ry", q, vec![n(FRAC_PI_2)])],
        "u1" => vec![g("rz", q, vec![p[0].clone()])],
        "u2" => vec![g("rz", q, vec![p[1].clone()]), g("ry", q, vec![n(FRAC_PI_2)]), g("rz", q, vec![p[0].clone()])],
        "u3" => vec![g("rz", q, vec![p[2].clone()]), g("ry", q, vec![p[0].clone()]), g("rz", q, vec![p[1].clone()])],
        "swap" => vec![g("cx", &[q[0], q[1]], vec![]), g("cx", &[q[1], q[0]], vec![]), g("cx", &[q[0], q[1]], vec![])],
        "cz" => vec![g("h", &[q[1]], vec![]), g("cx", q, vec![]), g("h", &[q[1]], vec![])],
        "cx" if prefer_cz => vec![g("h", &[q[1]], vec![]), g("cz", q, vec![]), g("h", &[q[1]], vec![])],
        "cy" => vec![g("sdg", &[q[1]], vec![]), g("cx", q, vec![]), g("s", &[q[1]], vec![])],
        "rzz" => vec![g("cx", q, vec![]), g("rz", &[q[1]], vec![p[0].clone()]), g("cx", q, vec![])],
        "rxx" => vec![
            g("h", &[q[0]], vec![]),
            g("h", &[q[1]], vec![]),
            g("cx", q, vec![]),
            g("rz", &[q[1]], vec![p[0].clone()]),
            g("cx", q, vec![]),
            g("h", &[q[0]], vec![]),
            g("h", &[q[1]], vec![]),
        ],
        "ryy" => vec![
            g("rx", &[q[0]], vec![n(FRAC_PI_2)]),
            g("rx", &[q[1]], vec![n(FRAC_PI_2)]),
            g("cx", q, vec![]),
            g("rz", &[q[1]], vec![p[0].clone()]),
            g("cx", q, vec![]),
            g("rx", &[q[0]], vec![n(-FRAC_PI_2)]),
            g("rx", &[q[1]], vec![n(-FRAC_PI_2)]),
        ],
        "crz" | "cry" => {
            let r = if i.name == "crz" { "rz" } else { "ry" };
            vec![
                g(r, &[q[1]], vec![p[0].scaled(0.5)]),
                g("cx", q, vec![]),
                g(r, &[q[1]], vec![p[0].scaled(-0.5)]),
                g("cx", q, vec![]),
            ]
        }
        "crx" => vec![g("h", &[q[1]], vec![]), g("crz", q, vec![p[0].clone()]), g("h", &[q[1]], vec![])],
        "cp" => vec![
            g("u1", &[q[0]], vec![p[0].scaled(0.5)]),
            g("cx", q, vec![]),
            g("u1", &[q[1]], vec![p[0].scaled(-0.5)]),
            g("cx", q, vec![]),
            g("u1", &[q[1]], vec![p[0].scaled(0.5)]),
        ],
        _ => return None,
    };
    Some(out)
}

/// Expansion by matrix synthesis for gates without a rule.
fn synthesize(i: &Instruction) -> Result<Vec<Instruction>, String> {
    let params = i.literal_params().ok_or_else(|| format!("no rule for symbolic gate '{}'", i.name))?;
    let m = gate::matrix(&i.name, &params).ok_or_else(|| format!("unknown gate '{}'", i.name))?;
    match i.qubits.len() {
        1 => Ok(synth_1q(&m, i.qubits[0])),
        2 => decompose_two_qubit(&m)
            .map(|d| d.on(i.qubits[0], i.qubits[1]))
            .ok_or_else(|| format!("two-qubit synthesis failed for '{}'", i.name)),
        k => Err(format!("cannot synthesize {k}-qubit gate '{}'", i.name)),
    }
}

/// Rewrites gates acting on three or more qubits.
pub fn unroll_to_2q(i: &Instruction) -> Result<Vec<Instruction>, String> {
    if !i.is_gate() || i.qubits.len() <= 2 {
        return Ok(vec![i.clone()]);
    }
    let Some(parts) = rule(i, false) else {
        return Err(format!("no decomposition for {}-qubit gate '{}'", i.qubits.len(), i.name));
    };
    let mut out = Vec::new();
    for p in parts {
        out.extend(unroll_to_2q(&p)?);
    }
    Ok(out)
}

/// Target gate set for [`unroll_to_basis`].
#[derive(Debug, Clone)]
pub struct Basis {
    gates: BTreeSet<String>,
    prefer_cz: bool,
}

impl Basis {
    /// Requires `rx`, `ry`, `rz` and at least one of `cx`, `cz`.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, String> {
        let gates: BTreeSet<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let has = |g: &str| gates.contains(g);
        if !(has("rx") && has("ry") && has("rz") && (has("cx") || has("cz"))) {
            return Err(format!("basis {gates:?} must contain rx, ry, rz and cx or cz"));
        }
        let prefer_cz = !has("cx");
        Ok(Basis { gates, prefer_cz })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.gates.contains(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.gates.iter().map(String::as_str)
    }
}

/// Expands `i` until every gate is in `basis`.
pub fn unroll_to_basis(i: &Instruction, basis: &Basis) -> Result<Vec<Instruction>, String> {
    expand(i, basis, 0)
}

fn expand(i: &Instruction, basis: &Basis, depth: usize) -> Result<Vec<Instruction>, String> {
    if !i.is_gate() || basis.contains(&i.name) {
        return Ok(vec![i.clone()]);
    }
    if depth > 12 {
        return Err(format!("rewrite of '{}' does not terminate", i.name));
    }
    let parts = match rule(i, basis.prefer_cz) {
        Some(p) => p,
        None => synthesize(i)?,
    };
    let mut out = Vec::new();
    for p in parts {
        out.extend(expand(&p, basis, depth + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::sim;
    use crate::synthesis::phase_distance;

    fn check(name: &str, nq: usize, params: &[f64], basis: &Basis) {
        let qubits: Vec<usize> = (0..nq).rev().collect();
        let i = Instruction::gate_f(name, &qubits, params);
        let mut a = Circuit::new(nq, 0);
        a.push(i.clone());
        let mut b = Circuit::new(nq, 0);
        for p in unroll_to_basis(&i, basis).unwrap() {
            assert!(basis.contains(&p.name), "{name} produced {}", p.name);
            b.push(p);
        }
        let d = phase_distance(&sim::unitary(&a).unwrap(), &sim::unitary(&b).unwrap());
        assert!(d < 1e-8, "{name}: {d}");
    }

    #[test]
    fn every_gate_unrolls_exactly() {
        for basis in [Basis::new(&["cx", "rx", "ry", "rz"]).unwrap(), Basis::new(&["cz", "rx", "ry", "rz"]).unwrap()] {
            for spec in gate::GATES {
                let params: Vec<f64> = (0..spec.num_params).map(|k| 0.37 + 0.91 * k as f64).collect();
                check(spec.name, spec.num_qubits, &params, &basis);
            }
        }
    }

    #[test]
    fn paper_identities() {
        let basis = Basis::new(&["cx", "h", "rx", "ry", "rz"]).unwrap();
        let swap = unroll_to_basis(&Instruction::gate_f("swap", &[0, 1], &[]), &basis).unwrap();
        let cx = |a, b| Instruction::gate_f("cx", &[a, b], &[]);
        assert_eq!(swap, vec![cx(0, 1), cx(1, 0), cx(0, 1)]);
        let cz = unroll_to_basis(&Instruction::gate_f("cz", &[0, 1], &[]), &basis).unwrap();
        let h1 = Instruction::gate_f("h", &[1], &[]);
        assert_eq!(cz, vec![h1.clone(), cx(0, 1), h1]);
    }

    #[test]
    fn symbolic_rules_and_errors() {
        let basis = Basis::new(&["cx", "rx", "ry", "rz"]).unwrap();
        let i = Instruction::gate("rzz", &[0, 1], vec![ParamExpr::sym("t")]);
        let out = unroll_to_basis(&i, &basis).unwrap();
        assert_eq!(out[1].params[0], ParamExpr::sym("t"));
        let ch = Instruction::gate("crz", &[0, 1], vec![ParamExpr::sym("t")]);
        assert!(unroll_to_basis(&ch, &basis).is_ok());
        assert!(Basis::new(&["cx", "rz"]).is_err());
        assert_eq!(unroll_to_2q(&Instruction::gate_f("ccx", &[0, 1, 2], &[])).unwrap().len(), 15);
    }
}
