use thiserror::Error;

/// Errors produced by the simulator, circuit builders, neuron and network.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or config record is out of its documented range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A gate or fragment was used against a register it does not fit.
    #[error("usage error: {0}")]
    Usage(String),

    /// An op inside a fragment failed; `index` is its position in the fragment.
    #[error("op #{index} in fragment '{label}': {source}")]
    FragmentOp {
        index: usize,
        label: String,
        #[source]
        source: Box<Error>,
    },

    /// Two logical qubits live in disconnected parts of the coupling graph.
    #[error("routing error: no path between logical qubits {a} and {b} (physical {pa} and {pb})")]
    Routing {
        a: usize,
        b: usize,
        pa: usize,
        pb: usize,
    },

    /// Training was attempted against an opening that does not match the commitment.
    #[error("commitment opening does not verify")]
    UnverifiedCommitment,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
