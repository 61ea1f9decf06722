use thiserror::Error;

/// Errors produced while reading the netlist text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undefined wire `{name}`")]
    UndefinedWire { line: usize, name: String },
    #[error("line {line}: duplicate wire `{name}`")]
    DuplicateWire { line: usize, name: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("line {line}: output {index} assigned twice")]
    DuplicateOutput { line: usize, index: usize },
    #[error("output {0} is never assigned")]
    MissingOutput(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("circuit line {line}: {message}")]
    CircuitFormat { line: usize, message: String },
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error("expected a bitstring of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("enumerating 2^{inputs} inputs exceeds the cap of 2^{cap}")]
    EnumerationCap { inputs: usize, cap: usize },
    #[error("{width} qubits exceeds the simulator cap of {cap}")]
    QubitCap { width: usize, cap: usize },
    #[error("circuit is not a built Q-marginal circuit: {0}")]
    NotBuiltForm(String),
    #[error("query budget {0} is too small for any estimation schedule")]
    BudgetTooSmall(u64),
}

impl Error {
    /// True for errors caused by a resource guard rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::QubitCap { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
