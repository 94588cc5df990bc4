//! Exact state-vector simulation: registers, the gate alphabet and seeded
//! projective measurement.
//!
//! A [`StateVector`] is owned by one caller at a time. Independent simulations
//! can run in parallel as long as each has its own [`RandomStream`].

mod gate;
mod rng;
mod state;

pub use gate::{GateKind, GateOp};
pub use rng::RandomStream;
pub use state::{BitString, StateVector, AMPLITUDE_TOLERANCE, MAX_QUBITS};
