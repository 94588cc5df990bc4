#![allow(dead_code)]

pub mod dense;

use amn_core::qsim::{GateOp, RandomStream, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

/// Normalized state with amplitudes drawn from `rng`.
pub fn random_state(n: usize, rng: &mut RandomStream) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn distinct(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..k].to_vec())
}

/// Any gate over an `n`-qubit register, `n ≥ 3`.
pub fn any_gate(n: usize) -> impl Strategy<Value = GateOp> {
    prop_oneof![
        (0..n).prop_map(GateOp::h),
        (0..n).prop_map(GateOp::x),
        (-4.0f64..4.0, 0..n).prop_map(|(l, q)| GateOp::u1(l, q)),
        distinct(n, 2).prop_map(|v| GateOp::cx(v[0], v[1])),
        distinct(n, 2).prop_map(|v| GateOp::cz(v[0], v[1])),
        distinct(n, 2).prop_map(|v| GateOp::swap(v[0], v[1])),
        (2..=n).prop_flat_map(move |k| distinct(n, k)).prop_map(|v| GateOp::mcz(&v[1..], v[0])),
    ]
}
