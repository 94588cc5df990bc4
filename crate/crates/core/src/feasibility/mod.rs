//! Gate-timing model and coherence budget.
//!
//! One repetition of the neuron's inner loop is one oracle plus one diffusion.
//! A neuron's total time is the repetition count summed over its inputs times
//! that repetition cost, and has to stay under T2. Solving that bound for the
//! participant count gives the largest network the device can serve.
//!
//! All durations are integer nanoseconds so the reference numbers come out
//! exact.

mod duration;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuits::{
    build_diffusion_simplified, build_oracle, pulse_census, CircuitFragment, CouplingGraph,
    OracleParams, PulseCensus,
};
use crate::error::{config, Error, Result};
use crate::neuron::RepetitionSchedule;
use crate::qsim::GateKind;

pub use duration::Nanos;

const MELBOURNE_JSON: &str = include_str!("../../data/melbourne.json");

/// Which gates cost time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimingModel {
    /// X gates are free, the oracle is six CX and the diffusion is four GD
    /// pulses plus one CX: 2100/640/2740 ns on the default profile.
    #[default]
    Paper,
    /// Every pulse of the fragments the simulator actually builds, with X
    /// charged as a GD pulse.
    Strict,
}

impl FromStr for TimingModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(TimingModel::Paper),
            "strict" => Ok(TimingModel::Strict),
            other => Err(config(format!("unknown timing model '{other}' (paper|strict)"))),
        }
    }
}

impl fmt::Display for TimingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimingModel::Paper => "paper",
            TimingModel::Strict => "strict",
        })
    }
}

/// CX duration override for one coupling edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeTime {
    pub a: usize,
    pub b: usize,
    pub time: Nanos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    #[serde(default)]
    pub name: String,
    pub t1: Nanos,
    pub t2: Nanos,
    pub cx_time: Nanos,
    pub gd_time: Nanos,
    pub buffer: Nanos,
    #[serde(default)]
    pub fc_time: Nanos,
    #[serde(default)]
    pub per_edge_cx: Vec<EdgeTime>,
    #[serde(default)]
    pub coupling: Option<CouplingGraph>,
}

impl Default for DeviceProfile {
    fn default() -> Self {
        Self::melbourne()
    }
}

impl DeviceProfile {
    /// The bundled 14-qubit Melbourne profile (average calibration numbers).
    pub fn melbourne() -> Self {
        serde_json::from_str(MELBOURNE_JSON).expect("bundled device profile parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config(format!("device profile: {e}")))
    }

    /// Non-fatal physical sanity checks.
    pub fn sanity_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.t2.0 > 2 * self.t1.0 {
            warnings.push(format!(
                "T2 ({}) exceeds 2*T1 ({}), which is unphysical",
                self.t2,
                self.t1 * 2
            ));
        }
        if let Some(g) = &self.coupling {
            for e in &self.per_edge_cx {
                if !g.has_edge(e.a, e.b) {
                    warnings.push(format!("per-edge CX time for ({}, {}) is not a coupling edge", e.a, e.b));
                }
            }
        }
        warnings
    }

    /// One GD pulse including its buffer.
    pub fn gd_slot(&self) -> Nanos {
        self.gd_time + self.buffer
    }

    /// CX duration on a physical edge, falling back to the average.
    pub fn cx_time_on(&self, a: usize, b: usize) -> Nanos {
        self.per_edge_cx
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map_or(self.cx_time, |e| e.time)
    }
}

/// Time for a census under a model, using the average CX time.
pub fn census_time(census: &PulseCensus, profile: &DeviceProfile, model: TimingModel) -> Nanos {
    let x_cost = match model {
        TimingModel::Paper => Nanos::ZERO,
        TimingModel::Strict => profile.gd_slot(),
    };
    profile.fc_time * census.fc_count
        + profile.gd_slot() * census.gd_count
        + profile.cx_time * census.cx_count
        + x_cost * census.x_count
}

/// Time for a physical fragment, charging each CX by its edge.
pub fn fragment_time(frag: &CircuitFragment, profile: &DeviceProfile, model: TimingModel) -> Nanos {
    crate::circuits::lower_to_native(frag)
        .ops
        .iter()
        .map(|op| {
            let q = &op.qubits;
            match op.kind {
                GateKind::Cx => profile.cx_time_on(q[0], q[1]),
                GateKind::Swap => profile.cx_time_on(q[0], q[1]) * 3,
                GateKind::U1(_) => profile.fc_time,
                GateKind::H => profile.gd_slot(),
                GateKind::X => match model {
                    TimingModel::Paper => Nanos::ZERO,
                    TimingModel::Strict => profile.gd_slot(),
                },
                GateKind::Cz | GateKind::Mcz => unreachable!("lowered to native gates"),
            }
        })
        .sum()
}

/// The worst-case oracle used for strict timing: `l = 6`, positions {0, 2},
/// `b = 0` (so it carries X gates).
pub fn reference_oracle() -> CircuitFragment {
    let params = OracleParams::new(vec![0, 2], 0, 1.0, 6).expect("valid reference params");
    build_oracle(&params, 6, 0, 6).expect("valid reference oracle")
}

/// Oracle cost. Paper model: six CX, X gates free.
pub fn time_of_oracle(profile: &DeviceProfile, model: TimingModel) -> Nanos {
    match model {
        TimingModel::Paper => profile.cx_time * 6,
        TimingModel::Strict => census_time(&pulse_census(&reference_oracle()), profile, model),
    }
}

/// Diffusion cost. Paper model: two free X gates, four GD slots, one CX and
/// one trailing buffer.
pub fn time_of_diffusion(profile: &DeviceProfile, model: TimingModel) -> Nanos {
    match model {
        // Four GD slots, the CX and the buffer that closes it.
        TimingModel::Paper => profile.gd_slot() * 4 + profile.cx_time + profile.buffer,
        TimingModel::Strict => {
            let d = build_diffusion_simplified([0, 1], 0, 2).expect("valid pair");
            census_time(&pulse_census(&d), profile, model)
        }
    }
}

/// Cost of one oracle + diffusion repetition.
pub fn time_of_repetition(profile: &DeviceProfile, model: TimingModel) -> Nanos {
    time_of_oracle(profile, model) + time_of_diffusion(profile, model)
}

/// Total neuron time: `Σ reps · t_rep`.
pub fn t_assoc(schedule: &RepetitionSchedule, profile: &DeviceProfile, model: TimingModel) -> Nanos {
    time_of_repetition(profile, model) * schedule.total_reps()
}

/// Largest usable weight z-score for a network of `participants`.
///
/// `(2/p) · (t2 / t_rep) − bias_sum`, where `bias_sum` defaults to the worst
/// case `p/2` (every bias at 1). A result at or below zero means the device
/// cannot run a useful neuron for that network size. Odd `p` is accepted and
/// treated as the real-valued `p/2` inputs.
pub fn max_std_range(participants: u32, t2: Nanos, t_rep: Nanos, bias_sum: Option<f64>) -> Result<f64> {
    if participants < 2 {
        return Err(config(format!("need at least 2 participants, got {participants}")));
    }
    if t_rep.0 == 0 {
        return Err(config("repetition time must be positive"));
    }
    let p = f64::from(participants);
    let bias_sum = bias_sum.unwrap_or(p / 2.0);
    Ok((2.0 / p) * (t2.as_f64() / t_rep.as_f64()) - bias_sum)
}

/// Per-input repetition cap `max(0, ⌊bias + max_std_range⌋)` for a network
/// of `participants`, with the worst-case bias sum.
///
/// With at most `p/2` inputs and `bias ≤ 1` this keeps `T_assoc < T2`.
pub fn repetition_cap(participants: u32, t2: Nanos, t_rep: Nanos, bias: f64) -> Result<u32> {
    let range = max_std_range(participants, t2, t_rep, None)?;
    let raw = (bias + range).floor();
    Ok(if raw <= 0.0 { 0 } else { raw as u32 })
}

/// Participant bound from T2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticipantBound {
    /// Positive root of `(2/p)·(t2/t_rep) = p/2`, i.e. `2·√(t2/t_rep)`.
    pub exact_root: f64,
    /// `exact_root` rounded to nearest.
    pub reported: u64,
}

pub fn max_participants(t2: Nanos, t_rep: Nanos) -> Result<ParticipantBound> {
    if t2.0 == 0 || t_rep.0 == 0 {
        return Err(config("t2 and t_rep must both be positive"));
    }
    let exact_root = 2.0 * (t2.as_f64() / t_rep.as_f64()).sqrt();
    Ok(ParticipantBound { exact_root, reported: exact_root.round() as u64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub model: TimingModel,
    pub t_oracle: Nanos,
    pub t_diffusion: Nanos,
    pub t_rep: Nanos,
    pub t_assoc: Nanos,
    pub t2: Nanos,
    pub total_reps: u64,
    pub budget_ok: bool,
}

/// Assembles the timing report and checks `T_assoc < T2`.
pub fn check_budget(
    schedule: &RepetitionSchedule,
    profile: &DeviceProfile,
    model: TimingModel,
) -> TimingReport {
    let t_oracle = time_of_oracle(profile, model);
    let t_diffusion = time_of_diffusion(profile, model);
    let t_rep = t_oracle + t_diffusion;
    let total_reps = schedule.total_reps();
    let t_assoc = t_rep * total_reps;
    TimingReport {
        model,
        t_oracle,
        t_diffusion,
        t_rep,
        t_assoc,
        t2: profile.t2,
        total_reps,
        budget_ok: t_assoc < profile.t2,
    }
}
