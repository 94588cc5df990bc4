//! The associative measuring neuron.
//!
//! A receiver starts its output register in the uniform superposition. Every
//! input whose list carries its expected bit `b` on all of its `id_set`
//! positions (the coincidence condition) runs its scheduled number of
//! oracle + diffusion rounds, each marking `y[id_set] = (b,…,b)`. Inputs that
//! fail the condition do nothing. The register is then measured and decoded:
//! the first input whose pattern appears in the measured bits is echoed,
//! otherwise the neuron stays silent.
//!
//! Because the inputs' lists are basis states by the time a receiver sees
//! them, the condition is evaluated classically and only the output register
//! is simulated. Distributions here are exact, so the same evolution serves
//! both sampling and the exact-probability view.

mod ideal;
mod schedule;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuits::{
    apply_fragment, build_diffusion_full, build_diffusion_simplified, build_pattern_marker,
    CircuitFragment, OracleParams,
};
use crate::error::{config, Result};
use crate::network::TernaryList;
use crate::qsim::{BitString, RandomStream, StateVector, MAX_QUBITS};

pub use ideal::{ideal_state, IdealNeuronState};
pub use schedule::{repetition_schedule, RepetitionSchedule, ScheduleEntry};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffusionMode {
    /// Two-qubit diffusion on the input's `id_set` pair.
    #[default]
    Simplified,
    /// Diffusion over the whole output register.
    Full,
}

impl std::str::FromStr for DiffusionMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplified" => Ok(DiffusionMode::Simplified),
            "full" => Ok(DiffusionMode::Full),
            other => Err(config(format!("unknown diffusion mode '{other}' (simplified|full)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronInput {
    /// The list this input delivered.
    pub value: TernaryList,
    #[serde(flatten)]
    pub params: OracleParams,
}

impl NeuronInput {
    /// Whether the delivered list carries `b` on every `id_set` position.
    /// Errors if the list still holds a 2.
    pub fn coincides(&self) -> Result<bool> {
        let bits = self
            .value
            .to_bits()
            .ok_or_else(|| config(format!("input list {} is not a basis list", self.value)))?;
        Ok(bits.matches(&self.params.id_set, self.params.b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronConfig {
    /// List length, also the output register width.
    pub l: usize,
    /// Default repetition count, in `[0, 1]`.
    pub bias: f64,
    #[serde(default)]
    pub diffusion: DiffusionMode,
    /// Upper bound on any single input's repetitions.
    #[serde(default)]
    pub cap: Option<u32>,
    pub inputs: Vec<NeuronInput>,
}

impl NeuronConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| config(format!("neuron config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.l) {
            return Err(config(format!("l = {} outside 1..={MAX_QUBITS}", self.l)));
        }
        schedule::check_bias(self.bias)?;
        for (i, input) in self.inputs.iter().enumerate() {
            let ctx = |e: crate::Error| config(format!("inputs[{i}]: {e}"));
            if input.value.len() != self.l {
                return Err(config(format!(
                    "inputs[{i}]: list length {} does not match l = {}",
                    input.value.len(),
                    self.l
                )));
            }
            input.params.validate(self.l).map_err(ctx)?;
            match self.diffusion {
                DiffusionMode::Simplified if input.params.id_set.len() != 2 => {
                    return Err(config(format!(
                        "inputs[{i}]: simplified diffusion needs |id_set| = 2, got {}",
                        input.params.id_set.len()
                    )));
                }
                DiffusionMode::Full if self.l < 2 => {
                    return Err(config("full diffusion needs l >= 2"));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> Vec<f64> {
        self.inputs.iter().map(|i| i.params.weight).collect()
    }

    pub fn schedule(&self) -> Result<RepetitionSchedule> {
        if self.inputs.is_empty() {
            return Ok(RepetitionSchedule::default());
        }
        repetition_schedule(&self.weights(), self.bias, self.cap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Echo,
    Silent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Echoed {
    pub b: u8,
    pub id_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeuronOutput {
    pub kind: OutputKind,
    pub measured_bits: BitString,
    pub matched_input: Option<usize>,
    pub echoed: Option<Echoed>,
}

impl NeuronOutput {
    pub fn silent(measured_bits: BitString) -> Self {
        Self { kind: OutputKind::Silent, measured_bits, matched_input: None, echoed: None }
    }

    pub fn echoed_bit(&self) -> Option<u8> {
        self.echoed.as_ref().map(|e| e.b)
    }
}

/// Decodes a measurement: the first input (by index) whose `(id_set, b)`
/// pattern appears in `bits` is echoed; no match is silence.
pub fn decode(inputs: &[NeuronInput], bits: BitString) -> NeuronOutput {
    inputs
        .iter()
        .position(|inp| bits.matches(&inp.params.id_set, inp.params.b))
        .map_or_else(
            || NeuronOutput::silent(bits),
            |i| NeuronOutput {
                kind: OutputKind::Echo,
                measured_bits: bits,
                matched_input: Some(i),
                echoed: Some(Echoed {
                    b: inputs[i].params.b,
                    id_set: inputs[i].params.id_set.clone(),
                }),
            },
        )
}

/// Output register after all scheduled rounds, before measurement.
#[derive(Debug, Clone)]
pub struct EvolvedNeuron {
    pub state: StateVector,
    pub schedule: RepetitionSchedule,
    /// Rounds actually run per input; zero for inputs that did not coincide.
    pub executed: Vec<u32>,
    inputs: Vec<NeuronInput>,
}

/// Exact probability of each decode result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeDistribution {
    pub silent: f64,
    pub per_input: Vec<f64>,
}

impl EvolvedNeuron {
    pub fn distribution(&self) -> BTreeMap<BitString, f64> {
        let l = self.state.num_qubits();
        self.state
            .exact_distribution()
            .into_iter()
            .map(|(i, p)| (BitString::new(l, i), p))
            .collect()
    }

    pub fn sample(&self, rng: &mut RandomStream) -> NeuronOutput {
        decode(&self.inputs, self.state.measure_all(rng))
    }

    pub fn decode_distribution(&self) -> DecodeDistribution {
        let mut out = DecodeDistribution { silent: 0.0, per_input: vec![0.0; self.inputs.len()] };
        for (bits, p) in self.distribution() {
            match decode(&self.inputs, bits).matched_input {
                Some(i) => out.per_input[i] += p,
                None => out.silent += p,
            }
        }
        out
    }
}

fn diffusion_for(cfg: &NeuronConfig, params: &OracleParams) -> Result<CircuitFragment> {
    match cfg.diffusion {
        DiffusionMode::Simplified => {
            build_diffusion_simplified([params.id_set[0], params.id_set[1]], 0, cfg.l)
        }
        DiffusionMode::Full => build_diffusion_full(cfg.l, 0, cfg.l),
    }
}

/// Runs the competing searches and returns the pre-measurement register.
pub fn evolve(cfg: &NeuronConfig) -> Result<EvolvedNeuron> {
    cfg.validate()?;
    let schedule = cfg.schedule()?;
    let mut state = StateVector::uniform(cfg.l)?;
    let mut executed = vec![0; cfg.inputs.len()];
    for (i, input) in cfg.inputs.iter().enumerate() {
        if !input.coincides()? {
            continue;
        }
        let reps = schedule.entries[i].reps;
        if reps == 0 {
            continue;
        }
        let marker = build_pattern_marker(&input.params.id_set, input.params.b, 0, cfg.l)?;
        let diffusion = diffusion_for(cfg, &input.params)?;
        for _ in 0..reps {
            apply_fragment(&mut state, &marker)?;
            apply_fragment(&mut state, &diffusion)?;
        }
        executed[i] = reps;
    }
    Ok(EvolvedNeuron { state, schedule, executed, inputs: cfg.inputs.clone() })
}

/// Exact outcome distribution over the output register, keyed by measured bits.
pub fn output_distribution(cfg: &NeuronConfig) -> Result<BTreeMap<BitString, f64>> {
    Ok(evolve(cfg)?.distribution())
}

/// Evolves, measures and decodes one receiver.
pub fn run_receiver(cfg: &NeuronConfig, rng: &mut RandomStream) -> Result<NeuronOutput> {
    if cfg.inputs.is_empty() {
        return Err(config("receiver needs at least one input"));
    }
    Ok(evolve(cfg)?.sample(rng))
}

/// Distributor step: measure the whole received register. Positions sent as
/// 0/1 come back unchanged, positions sent as 2 come back as fair coin flips.
pub fn run_distributor(register: StateVector, rng: &mut RandomStream) -> BitString {
    register.measure_all(rng)
}
