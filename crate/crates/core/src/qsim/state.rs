use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gate::{GateKind, GateOp};
use super::rng::RandomStream;
use crate::error::{config, usage, Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 20;

/// Tolerance for norm and unitarity checks.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;

/// Probabilities at or below this are dropped from [`StateVector::exact_distribution`].
const PROBABILITY_FLOOR: f64 = 1e-15;

/// A measured register. Bit `j` of `value` is qubit `j`, which is also
/// position `j` of the protocol list, so the text form prints qubit 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    len: usize,
    value: usize,
}

impl BitString {
    pub fn new(len: usize, value: usize) -> Self {
        debug_assert!(len <= usize::BITS as usize && (len == usize::BITS as usize || value >> len == 0));
        Self { len, value }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let value = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b & 1) << j));
        Self { len: bits.len(), value }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Basis-state index.
    pub fn value(&self) -> usize {
        self.value
    }

    pub fn bit(&self, j: usize) -> u8 {
        ((self.value >> j) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|j| self.bit(j)).collect()
    }

    /// True when every position in `positions` holds `b`.
    pub fn matches(&self, positions: &[usize], b: u8) -> bool {
        positions.iter().all(|&j| self.bit(j) == b)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", self.bit(j))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(config(format!("invalid bit '{other}' in \"{s}\""))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact state of an `l`-qubit register, `2^l` complex amplitudes.
///
/// Qubit 0 is the least-significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        if index >= 1 << num_qubits {
            return Err(usage(format!("basis index {index} out of range for {num_qubits} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Uniform superposition `H^⊗l |0…0⟩`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { num_qubits, amplitudes: vec![a; dim] })
    }

    /// Takes ownership of raw amplitudes. The vector must have power-of-two
    /// length and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(usage(format!("amplitude vector length {dim} is not 2^l with l >= 1")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_register(num_qubits)?;
        let state = Self { num_qubits, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > AMPLITUDE_TOLERANCE {
            return Err(usage(format!("amplitudes are not normalized (|psi|^2 = {norm})")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let q = &op.qubits;
        match op.kind {
            GateKind::H => self.apply_h(q[0]),
            GateKind::X => self.apply_x(q[0]),
            GateKind::U1(lambda) => {
                let phase = Complex64::from_polar(1.0, lambda);
                let mask = 1usize << q[0];
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a *= phase;
                    }
                }
            }
            GateKind::Cx => {
                let (c, t) = (1usize << q[0], 1usize << q[1]);
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            GateKind::Cz | GateKind::Mcz => {
                let mask = q.iter().fold(0usize, |m, &j| m | (1 << j));
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            GateKind::Swap => {
                let (a, b) = (1usize << q[0], 1usize << q[1]);
                for i in 0..self.amplitudes.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amplitudes.swap(i, (i & !a) | b);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies `ops` in order. On failure the state is left as it was before
    /// the failing op and the error carries that op's index.
    pub fn apply_all<'a>(
        &mut self,
        ops: impl IntoIterator<Item = &'a GateOp>,
        label: &str,
    ) -> Result<()> {
        for (index, op) in ops.into_iter().enumerate() {
            self.apply(op).map_err(|e| Error::FragmentOp {
                index,
                label: label.to_string(),
                source: Box::new(e),
            })?;
        }
        Ok(())
    }

    fn apply_h(&mut self, q: usize) {
        let mask = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | mask]);
                self.amplitudes[i] = (a0 + a1) * s;
                self.amplitudes[i | mask] = (a0 - a1) * s;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let mask = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                self.amplitudes.swap(i, i | mask);
            }
        }
    }

    /// Samples the whole register with the Born rule.
    pub fn measure_all(&self, rng: &mut RandomStream) -> BitString {
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return BitString::new(self.num_qubits, i);
            }
        }
        // Rounding left `acc` a hair under 1.
        BitString::new(self.num_qubits, last_nonzero)
    }

    /// Probability that qubit `q` reads 1.
    pub fn marginal_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Measures one qubit and collapses the state onto the outcome.
    pub fn measure_qubit(&mut self, q: usize, rng: &mut RandomStream) -> Result<u8> {
        let p1 = self.marginal_one(q)?;
        let bit = u8::from(rng.next_f64() < p1);
        self.collapse(q, bit)?;
        Ok(bit)
    }

    /// Projects qubit `q` onto `bit` and renormalizes.
    pub fn collapse(&mut self, q: usize, bit: u8) -> Result<()> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        let keep = if bit == 1 { mask } else { 0 };
        let mut norm = 0.0;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask != keep {
                *a = Complex64::new(0.0, 0.0);
            } else {
                norm += a.norm_sqr();
            }
        }
        if norm <= 0.0 {
            return Err(usage(format!("outcome {bit} on qubit {q} has zero probability")));
        }
        let scale = 1.0 / norm.sqrt();
        for a in &mut self.amplitudes {
            *a *= scale;
        }
        Ok(())
    }

    /// `|amplitude|²` per basis index, omitting (numerically) zero entries.
    pub fn exact_distribution(&self) -> BTreeMap<usize, f64> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter_map(|(i, a)| {
                let p = a.norm_sqr();
                (p > PROBABILITY_FLOOR).then_some((i, p))
            })
            .collect()
    }

    /// Debug dump: JSON array of `[re, im]` pairs in index order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.amplitudes
                .iter()
                .map(|a| serde_json::json!([a.re, a.im]))
                .collect(),
        )
    }

    /// Largest `|⟨self|other⟩|` deviation from 1, i.e. equality up to global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() == 0.0 {
            return f64::INFINITY;
        }
        let phase = overlap / overlap.norm();
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(usage(format!(
                "qubit {q} out of range for a {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }
}

fn check_register(num_qubits: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&num_qubits) {
        return Err(config(format!(
            "register size {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}
