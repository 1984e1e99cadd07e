use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid Pauli character {ch:?} at position {position}")]
    InvalidPauliChar { ch: char, position: usize },

    #[error("Pauli string has length {found}, expected {expected}")]
    PauliLength { expected: usize, found: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("Hamiltonian source contains no terms")]
    EmptyHamiltonian,

    #[error("operand must be phase-free (phase exponent {0})")]
    NonZeroPhase(u8),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),

    #[error("{n_qubits} qubits exceeds the cap of {cap} for {what}")]
    QubitCap { n_qubits: usize, cap: usize, what: &'static str },

    #[error("parameter vector has length {found}, ansatz expects {expected}")]
    ParamLength { expected: usize, found: usize },

    #[error("unknown {kind} {name:?} (available: {available})")]
    UnknownStrategy { kind: &'static str, name: String, available: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
