//! Circuit fragments for the neuron: the parameterized oracle, Grover
//! diffusion, native-gate decompositions, coupling-graph routing and pulse
//! accounting.

mod census;
mod decompose;
mod oracle;
mod routing;

use serde::{Deserialize, Serialize};

use crate::error::{config, usage, Result};
use crate::qsim::{GateOp, StateVector};

pub use census::{pulse_census, PulseCensus};
pub use decompose::{decompose_ccz, decompose_cz, decompose_mcz, lower_to_native};
pub use oracle::{
    build_diffusion_full, build_diffusion_simplified, build_oracle, build_pattern_marker,
};
pub use routing::{route, CouplingGraph, RoutedFragment};

/// Parameters of one input's oracle: the positions it checks, the bit it
/// expects there and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    pub id_set: Vec<usize>,
    pub b: u8,
    pub weight: f64,
}

impl OracleParams {
    /// Sorts `id_set` and checks the invariants against a list length `l`.
    pub fn new(mut id_set: Vec<usize>, b: u8, weight: f64, l: usize) -> Result<Self> {
        id_set.sort_unstable();
        let params = Self { id_set, b, weight };
        params.validate(l)?;
        Ok(params)
    }

    pub fn validate(&self, l: usize) -> Result<()> {
        if self.id_set.is_empty() {
            return Err(config("id_set must not be empty"));
        }
        if self.id_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config(format!(
                "id_set {:?} must be sorted with distinct entries",
                self.id_set
            )));
        }
        if let Some(&q) = self.id_set.iter().find(|&&q| q >= l) {
            return Err(config(format!("id_set index {q} out of range for list length {l}")));
        }
        if self.b > 1 {
            return Err(config(format!("b must be 0 or 1, got {}", self.b)));
        }
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(config(format!("weight {} outside (0, 1]", self.weight)));
        }
        Ok(())
    }
}

/// An ordered gate list over a register of fixed size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFragment {
    pub label: String,
    pub register_size: usize,
    pub ops: Vec<GateOp>,
}

impl CircuitFragment {
    pub fn new(label: impl Into<String>, register_size: usize) -> Self {
        Self { label: label.into(), register_size, ops: Vec::new() }
    }

    pub fn push(&mut self, op: GateOp) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> &mut Self {
        self.ops.extend(ops);
        self
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, op) in self.ops.iter().enumerate() {
            op.validate(self.register_size)
                .map_err(|e| usage(format!("{} op #{i}: {e}", self.label)))?;
        }
        Ok(())
    }

    /// Reversed fragment with each gate inverted.
    pub fn inverse(&self) -> Self {
        Self {
            label: format!("{}^-1", self.label),
            register_size: self.register_size,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    pub fn count(&self, pred: impl Fn(&GateOp) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(op)).count()
    }
}

/// Runs `frag` on `state` in order.
pub fn apply_fragment(state: &mut StateVector, frag: &CircuitFragment) -> Result<()> {
    if frag.register_size > state.num_qubits() {
        return Err(usage(format!(
            "fragment '{}' needs {} qubits, state has {}",
            frag.label,
            frag.register_size,
            state.num_qubits()
        )));
    }
    state.apply_all(&frag.ops, &frag.label)
}
