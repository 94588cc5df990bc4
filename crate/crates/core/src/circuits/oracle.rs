use super::{CircuitFragment, OracleParams};
use crate::error::{usage, Result};
use crate::qsim::GateOp;

/// Input oracle over an `x` register (the input list) and a `y` register (the
/// neuron output), both `l` qubits wide.
///
/// The marked pattern is `x[id_set] = (b,…,b)` together with `y[id_set] = (b,…,b)`,
/// which picks up a single `-1` phase. It is one multi-controlled Z with
/// controls `x[id_set] ∪ y[id_set \ {last}]` and target `y[last]`; for `b = 0`
/// every involved qubit is conjugated by X.
pub fn build_oracle(
    params: &OracleParams,
    l: usize,
    x_offset: usize,
    y_offset: usize,
) -> Result<CircuitFragment> {
    params.validate(l)?;
    let x_range = x_offset..x_offset + l;
    let y_range = y_offset..y_offset + l;
    if x_range.start < y_range.end && y_range.start < x_range.end {
        return Err(usage(format!(
            "x register {x_range:?} and y register {y_range:?} overlap"
        )));
    }
    let register_size = x_range.end.max(y_range.end);
    let mut frag = CircuitFragment::new(
        format!("U(id={:?},b={})", params.id_set, params.b),
        register_size,
    );

    let xs: Vec<usize> = params.id_set.iter().map(|&q| x_offset + q).collect();
    let ys: Vec<usize> = params.id_set.iter().map(|&q| y_offset + q).collect();
    let flips: Vec<GateOp> = if params.b == 0 {
        xs.iter().chain(&ys).map(|&q| GateOp::x(q)).collect()
    } else {
        Vec::new()
    };

    let (&target, y_controls) = ys.split_last().expect("id_set is non-empty");
    let controls: Vec<usize> = xs.iter().chain(y_controls).copied().collect();

    frag.extend(flips.iter().cloned());
    frag.push(GateOp::mcz(&controls, target));
    frag.extend(flips);
    Ok(frag)
}

/// The oracle restricted to `y` once the input is known to satisfy the
/// coincidence condition: phase-flips every basis state with
/// `y[id_set] = (b,…,b)`.
pub fn build_pattern_marker(
    id_set: &[usize],
    b: u8,
    y_offset: usize,
    register_size: usize,
) -> Result<CircuitFragment> {
    if id_set.is_empty() {
        return Err(usage("pattern marker needs a non-empty id_set"));
    }
    let ys: Vec<usize> = id_set.iter().map(|&q| y_offset + q).collect();
    let mut frag = CircuitFragment::new(format!("mark(id={id_set:?},b={b})"), register_size);
    let flips: Vec<GateOp> = if b == 0 {
        ys.iter().map(|&q| GateOp::x(q)).collect()
    } else {
        Vec::new()
    };
    frag.extend(flips.iter().cloned());
    match ys.split_last() {
        Some((&t, [])) => frag.push(GateOp::u1(std::f64::consts::PI, t)),
        Some((&t, controls)) => frag.push(GateOp::mcz(controls, t)),
        None => unreachable!(),
    };
    frag.extend(flips);
    frag.validate()?;
    Ok(frag)
}

/// Two-qubit Grover diffusion on `pair`, identity elsewhere:
/// `H,H · X,X · (H·CX·H) · X,X · H,H`.
///
/// Equals `2|s⟩⟨s| − I` on the pair up to a global phase of −1.
pub fn build_diffusion_simplified(
    pair: [usize; 2],
    y_offset: usize,
    register_size: usize,
) -> Result<CircuitFragment> {
    if pair[0] == pair[1] {
        return Err(usage(format!("diffusion pair uses qubit {} twice", pair[0])));
    }
    let (c, t) = (y_offset + pair[0], y_offset + pair[1]);
    let mut frag = CircuitFragment::new(format!("D2({},{})", pair[0], pair[1]), register_size);
    frag.extend([GateOp::h(c), GateOp::h(t), GateOp::x(c), GateOp::x(t)]);
    frag.extend([GateOp::h(t), GateOp::cx(c, t), GateOp::h(t)]);
    frag.extend([GateOp::x(c), GateOp::x(t), GateOp::h(c), GateOp::h(t)]);
    frag.validate()?;
    Ok(frag)
}

/// Full Grover diffusion on `y[0..l]`: `H^⊗l · X^⊗l · MCZ · X^⊗l · H^⊗l`,
/// where the MCZ has `l − 1` controls.
pub fn build_diffusion_full(
    l: usize,
    y_offset: usize,
    register_size: usize,
) -> Result<CircuitFragment> {
    if l < 2 {
        return Err(usage(format!("full diffusion needs at least 2 qubits, got {l}")));
    }
    let ys: Vec<usize> = (y_offset..y_offset + l).collect();
    let mut frag = CircuitFragment::new(format!("D{l}"), register_size);
    frag.extend(ys.iter().map(|&q| GateOp::h(q)));
    frag.extend(ys.iter().map(|&q| GateOp::x(q)));
    let (&t, controls) = ys.split_last().expect("l >= 2");
    frag.push(GateOp::mcz(controls, t));
    frag.extend(ys.iter().map(|&q| GateOp::x(q)));
    frag.extend(ys.iter().map(|&q| GateOp::h(q)));
    frag.validate()?;
    Ok(frag)
}
