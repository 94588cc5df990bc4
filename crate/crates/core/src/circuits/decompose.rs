use std::f64::consts::PI;

use super::CircuitFragment;
use crate::error::{usage, Result};
use crate::qsim::{GateKind, GateOp};

/// CZ as `H(t) · CX(c→t) · H(t)` on two abstract qubits (control 0, target 1).
pub fn decompose_cz() -> CircuitFragment {
    let mut frag = CircuitFragment::new("cz", 2);
    frag.extend([GateOp::h(1), GateOp::cx(0, 1), GateOp::h(1)]);
    frag
}

/// CCZ over three abstract qubits with 6 CX and 7 `T`/`T†` phases.
pub fn decompose_ccz() -> CircuitFragment {
    let mut frag = decompose_mcz(3).expect("3 qubits is a valid mcz width");
    frag.label = "ccz".to_string();
    frag
}

/// Ancilla-free Z on `|1…1⟩` over `n` qubits using only CX and `u1` phases.
///
/// Uses the parity expansion
/// `x_0 x_1 … x_{n-1} = 2^{1-n} Σ_{S≠∅} (−1)^{|S|-1} ⊕_{i∈S} x_i`:
/// every parity gets a phase of `±π / 2^{n-1}`. Parities whose highest
/// member is `m` are accumulated on line `m` by walking the Gray code over
/// the lower lines, one CX per step plus one to restore the line. The total
/// is `2^n − 2` CX and `2^n − 1` phases; for `n = 3` that is the 6-CX, 7-T
/// CCZ.
pub fn decompose_mcz(n: usize) -> Result<CircuitFragment> {
    if !(2..=20).contains(&n) {
        return Err(usage(format!("mcz decomposition needs 2..=20 qubits, got {n}")));
    }
    let unit = PI / f64::from(1u32 << (n - 1));
    let phase = |subset_size: u32| {
        if subset_size % 2 == 1 {
            unit
        } else {
            -unit
        }
    };

    let mut frag = CircuitFragment::new(format!("mcz{n}"), n);
    frag.push(GateOp::u1(phase(1), 0));
    for line in 1..n {
        frag.push(GateOp::u1(phase(1), line));
        let steps = 1usize << line;
        for k in 1..steps {
            let flipped = k.trailing_zeros() as usize;
            let gray = k ^ (k >> 1);
            frag.push(GateOp::cx(flipped, line));
            frag.push(GateOp::u1(phase(gray.count_ones() + 1), line));
        }
        // The walk ends on the Gray code 1 << (line - 1).
        frag.push(GateOp::cx(line - 1, line));
    }
    Ok(frag)
}

/// Rewrites CZ and MCZ into `{H, X, CX, u1, SWAP}`.
pub fn lower_to_native(frag: &CircuitFragment) -> CircuitFragment {
    let mut out = CircuitFragment::new(format!("{}:native", frag.label), frag.register_size);
    for op in &frag.ops {
        out.extend(lower_op(op));
    }
    out
}

pub(crate) fn lower_op(op: &GateOp) -> Vec<GateOp> {
    match op.kind {
        GateKind::Cz => remapped(&decompose_cz(), &op.qubits),
        GateKind::Mcz if op.qubits.len() == 2 => remapped(&decompose_cz(), &op.qubits),
        GateKind::Mcz => {
            let frag = decompose_mcz(op.qubits.len()).expect("validated width");
            remapped(&frag, &op.qubits)
        }
        _ => vec![op.clone()],
    }
}

fn remapped(frag: &CircuitFragment, qubits: &[usize]) -> Vec<GateOp> {
    frag.ops.iter().map(|g| g.remap(|q| qubits[q])).collect()
}
