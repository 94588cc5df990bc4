//! Simulator for a Grover-search neuron and the detectable Byzantine
//! agreement network built from it, with device timing estimates.

pub mod circuits;
pub mod error;
pub mod feasibility;
pub mod network;
pub mod neuron;
pub mod qsim;
pub mod stats;

pub use circuits::{CircuitFragment, CouplingGraph, OracleParams, PulseCensus};
pub use error::{Error, Result};
pub use feasibility::{DeviceProfile, Nanos, TimingModel, TimingReport};
pub use network::{Network, NetworkConfig, RoundOutcome, TernaryList};
pub use neuron::{DiffusionMode, NeuronConfig, NeuronInput, NeuronOutput, RepetitionSchedule};
pub use qsim::{BitString, GateKind, GateOp, RandomStream, StateVector};
