//! Circuit standardization: idle-qubit pruning, register renaming,
//! measurement completion and barrier insertion.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Circuit, InstrKind, Instruction};

/// Removes qubits that take part in no gate and no measure.
///
/// Returns the reduced circuit and the old-to-new qubit index map.
pub fn prune_idle_qubits(c: &Circuit) -> (Circuit, BTreeMap<usize, usize>) {
    let used: BTreeSet<usize> = c.used_qubits().into_iter().collect();
    let map: BTreeMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();

    let mut qregs = Vec::new();
    let mut offset = 0;
    for (name, size) in &c.qregs {
        let kept = (offset..offset + size).filter(|q| used.contains(q)).count();
        if kept > 0 {
            qregs.push((name.clone(), kept));
        }
        offset += size;
    }

    let mut instructions = Vec::with_capacity(c.instructions.len());
    for instr in &c.instructions {
        let qubits: Vec<usize> = instr.qubits.iter().filter_map(|q| map.get(q).copied()).collect();
        if instr.kind == InstrKind::Barrier && qubits.is_empty() {
            continue;
        }
        instructions.push(Instruction { qubits, ..instr.clone() });
    }
    let out = Circuit {
        qregs,
        cregs: c.cregs.clone(),
        instructions,
        metadata: c.metadata.clone(),
    };
    (out, map)
}

/// Collapses all quantum registers into `q` and all classical registers into
/// `c`. Flat indices are unchanged, so the renaming is order preserving.
pub fn rename_registers(c: &Circuit) -> Circuit {
    let mut out = c.clone();
    let nq = c.num_qubits();
    let nc = c.num_clbits();
    out.qregs = if c.qregs.is_empty() { Vec::new() } else { vec![("q".into(), nq)] };
    out.cregs = if c.cregs.is_empty() { Vec::new() } else { vec![("c".into(), nc)] };
    out
}

/// Makes sure every measured qubit has a classical bit and that the
/// classical register has exactly the needed size.
///
/// Without any measure, all gate-touched qubits are measured in ascending
/// order after the last instruction.
pub fn complete_measurements(c: &Circuit) -> Circuit {
    let has_measure = c.instructions.iter().any(|i| i.kind == InstrKind::Measure);
    let mut out = c.clone();
    if !has_measure {
        let mut touched = BTreeSet::new();
        for i in c.instructions.iter().filter(|i| i.is_gate()) {
            touched.extend(i.qubits.iter().copied());
        }
        if touched.is_empty() {
            return out;
        }
        out.cregs = vec![("c".into(), touched.len())];
        for (k, q) in touched.into_iter().enumerate() {
            out.push(Instruction::measure(q, k));
        }
        return out;
    }

    let used: BTreeSet<usize> = c
        .instructions
        .iter()
        .filter(|i| i.kind == InstrKind::Measure)
        .flat_map(|i| i.clbits.iter().copied())
        .collect();
    if used.len() == c.num_clbits() {
        return out;
    }
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(k, &old)| (old, k)).collect();
    out.cregs = vec![("c".into(), used.len())];
    for instr in &mut out.instructions {
        for cb in &mut instr.clbits {
            *cb = remap[cb];
        }
    }
    out
}

/// Inserts one barrier over the measured qubits right before the trailing
/// block of measurements, unless such a barrier is already there.
pub fn insert_barriers(c: &Circuit) -> Circuit {
    let instrs = &c.instructions;
    let mut start = instrs.len();
    while start > 0 && instrs[start - 1].kind == InstrKind::Measure {
        start -= 1;
    }
    if start == instrs.len() {
        return c.clone();
    }
    let measured: BTreeSet<usize> = instrs[start..].iter().map(|i| i.qubits[0]).collect();
    if start > 0 && instrs[start - 1].kind == InstrKind::Barrier {
        let covered: BTreeSet<usize> = instrs[start - 1].qubits.iter().copied().collect();
        if measured.is_subset(&covered) {
            return c.clone();
        }
    }
    let mut out = c.clone();
    let qs: Vec<usize> = measured.into_iter().collect();
    out.instructions.insert(start, Instruction::barrier(&qs));
    out
}

/// Full standardization pipeline; idempotent.
pub fn standardize(c: &Circuit) -> Circuit {
    let pruned = if c.used_qubits().is_empty() { c.clone() } else { prune_idle_qubits(c).0 };
    let renamed = rename_registers(&pruned);
    let measured = complete_measurements(&renamed);
    insert_barriers(&measured)
}
