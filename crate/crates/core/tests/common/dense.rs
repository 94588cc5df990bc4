//! Brute-force reference: every gate as an explicit `2^n × 2^n` matrix built
//! from Kronecker products of 2×2 factors. Qubit 0 is the rightmost factor.

#![allow(dead_code)]

use amn_core::circuits::CircuitFragment;
use amn_core::qsim::{GateKind, GateOp, StateVector};
use num_complex::Complex64;

type C = Complex64;
type M2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

fn m2_id() -> M2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

fn m2_x() -> M2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

fn m2_h() -> M2 {
    let r = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

fn m2_p0() -> M2 {
    [[ONE, ZERO], [ZERO, ZERO]]
}

fn m2_p1() -> M2 {
    [[ZERO, ZERO], [ZERO, ONE]]
}

fn m2_u1(lambda: f64) -> M2 {
    [[ONE, ZERO], [ZERO, C::from_polar(1.0, lambda)]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub data: Vec<C>,
}

impl Dense {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn identity(n: usize) -> Self {
        let d = 1 << n;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            data[i * d + i] = ONE;
        }
        Self { n, data }
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim() + c]
    }

    /// `factors[q]` acts on qubit `q`; the result is `f[n-1] ⊗ … ⊗ f[0]`.
    pub fn kron(factors: &[M2]) -> Self {
        let n = factors.len();
        let d = 1usize << n;
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut v = ONE;
                for (q, f) in factors.iter().enumerate() {
                    v *= f[(r >> q) & 1][(c >> q) & 1];
                    if v == ZERO {
                        break;
                    }
                }
                data[r * d + c] = v;
            }
        }
        Self { n, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { n: self.n, data }
    }

    pub fn scale(&self, s: C) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim();
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Self { n: self.n, data }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|k| self.data[i * d + k] * v[k]).sum()).collect()
    }

    pub fn diagonal(values: &[C]) -> Self {
        let d = values.len();
        let n = d.trailing_zeros() as usize;
        let mut data = vec![ZERO; d * d];
        for (i, v) in values.iter().enumerate() {
            data[i * d + i] = *v;
        }
        Self { n, data }
    }

    /// `min over |φ|=1` of `max |A − φ·B|`, with the phase taken from the
    /// largest entry of `B`.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("non-empty");
        let phase = self.data[idx] / other.data[idx];
        let phase = if phase.norm() > 0.0 { phase / phase.norm() } else { ONE };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `U†U` equals identity within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let v: C = (0..d).map(|k| self.data[k * d + i].conj() * self.data[k * d + j]).sum();
                let want = if i == j { ONE } else { ZERO };
                if (v - want).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn single(n: usize, q: usize, m: M2) -> Dense {
    let mut f = vec![m2_id(); n];
    f[q] = m;
    Dense::kron(&f)
}

/// `I − 2 Π_{q∈qs} |1⟩⟨1|_q`: phase −1 when every listed qubit is 1.
fn all_ones_flip(n: usize, qs: &[usize]) -> Dense {
    let mut f = vec![m2_id(); n];
    for &q in qs {
        f[q] = m2_p1();
    }
    Dense::identity(n).add(&Dense::kron(&f).scale(C::new(-2.0, 0.0)))
}

fn cx(n: usize, c: usize, t: usize) -> Dense {
    let mut off = vec![m2_id(); n];
    off[c] = m2_p0();
    let mut on = vec![m2_id(); n];
    on[c] = m2_p1();
    on[t] = m2_x();
    Dense::kron(&off).add(&Dense::kron(&on))
}

pub fn gate_matrix(op: &GateOp, n: usize) -> Dense {
    let q = &op.qubits;
    match op.kind {
        GateKind::H => single(n, q[0], m2_h()),
        GateKind::X => single(n, q[0], m2_x()),
        GateKind::U1(l) => single(n, q[0], m2_u1(l)),
        GateKind::Cx => cx(n, q[0], q[1]),
        GateKind::Cz | GateKind::Mcz => all_ones_flip(n, q),
        GateKind::Swap => cx(n, q[0], q[1]).mul(&cx(n, q[1], q[0])).mul(&cx(n, q[0], q[1])),
    }
}

/// Unitary of a whole op list, first op applied first.
pub fn ops_matrix(ops: &[GateOp], n: usize) -> Dense {
    ops.iter().fold(Dense::identity(n), |acc, op| gate_matrix(op, n).mul(&acc))
}

pub fn fragment_matrix(frag: &CircuitFragment) -> Dense {
    ops_matrix(&frag.ops, frag.register_size)
}

/// Unitary the simulator actually implements, read off column by column.
pub fn simulated_matrix(frag: &CircuitFragment) -> Dense {
    let n = frag.register_size;
    let d = 1usize << n;
    let mut data = vec![ZERO; d * d];
    for c in 0..d {
        let mut s = StateVector::basis(n, c).expect("valid basis");
        s.apply_all(&frag.ops, &frag.label).expect("valid fragment");
        for (r, a) in s.amplitudes().iter().enumerate() {
            data[r * d + c] = *a;
        }
    }
    Dense { n, data }
}

/// `2|s⟩⟨s| − I` on `n` qubits.
pub fn grover_reflection(n: usize) -> Dense {
    let d = 1usize << n;
    let s = C::new(2.0 / d as f64, 0.0);
    Dense { n, data: vec![s; d * d] }.add(&Dense::identity(n).scale(C::new(-1.0, 0.0)))
}
