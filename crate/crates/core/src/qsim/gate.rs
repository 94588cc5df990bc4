use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

/// The gate alphabet: Hadamard, Pauli-X, CNOT, CZ, multi-controlled Z,
/// the diagonal phase `u1(λ)` and SWAP.
///
/// `T` and `T†` are `U1(π/4)` and `U1(-π/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", content = "lambda", rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Cx,
    Cz,
    Mcz,
    U1(f64),
    Swap,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Mcz => "mcz",
            GateKind::U1(_) => "u1",
            GateKind::Swap => "swap",
        }
    }
}

/// One gate applied to an ordered list of qubits.
///
/// For controlled kinds the controls come first and the target last. CZ and
/// MCZ are symmetric in their qubits, but the ordering is kept so that
/// decompositions know which line is the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    #[serde(flatten)]
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, qubits: vec![q] }
    }

    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, qubits: vec![q] }
    }

    pub fn u1(lambda: f64, q: usize) -> Self {
        Self { kind: GateKind::U1(lambda), qubits: vec![q] }
    }

    pub fn t(q: usize) -> Self {
        Self::u1(std::f64::consts::FRAC_PI_4, q)
    }

    pub fn tdg(q: usize) -> Self {
        Self::u1(-std::f64::consts::FRAC_PI_4, q)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cx, qubits: vec![control, target] }
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cz, qubits: vec![control, target] }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self { kind: GateKind::Swap, qubits: vec![a, b] }
    }

    /// Multi-controlled Z. With a single control this is the same unitary as CZ.
    pub fn mcz(controls: &[usize], target: usize) -> Self {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        Self { kind: GateKind::Mcz, qubits }
    }

    /// Checks arity, index range and distinctness against a register of `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let arity_ok = match self.kind {
            GateKind::H | GateKind::X | GateKind::U1(_) => self.qubits.len() == 1,
            GateKind::Cx | GateKind::Cz | GateKind::Swap => self.qubits.len() == 2,
            GateKind::Mcz => self.qubits.len() >= 2,
        };
        if !arity_ok {
            return Err(usage(format!(
                "{} takes {} qubits, got {}",
                self.kind.name(),
                match self.kind {
                    GateKind::Mcz => "at least 2",
                    GateKind::Cx | GateKind::Cz | GateKind::Swap => "2",
                    _ => "1",
                },
                self.qubits.len()
            )));
        }
        if let GateKind::U1(lambda) = self.kind {
            if !lambda.is_finite() {
                return Err(usage("u1 angle must be finite"));
            }
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(usage(format!(
                    "qubit {q} out of range for a {num_qubits}-qubit register"
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(usage(format!("duplicate qubit {q} in {}", self.kind.name())));
            }
        }
        Ok(())
    }

    /// The inverse gate. Everything except `U1` is self-inverse.
    pub fn inverse(&self) -> Self {
        match self.kind {
            GateKind::U1(lambda) => Self::u1(-lambda, self.qubits[0]),
            _ => self.clone(),
        }
    }

    /// Same gate with every qubit index passed through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        Self {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, GateKind::Cz | GateKind::Mcz | GateKind::U1(_))
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::U1(lambda) => write!(f, "u1({lambda:.6})")?,
            k => write!(f, "{}", k.name())?,
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}
