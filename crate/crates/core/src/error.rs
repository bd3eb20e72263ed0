use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {requested} qubits requested, limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} used more than once in the same operation")]
    DuplicateQubit(usize),

    #[error("gate `{gate}` expects {expected} target qubit(s), got {found}")]
    Arity {
        gate: String,
        expected: String,
        found: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("coupling graph is not connected")]
    Disconnected,

    #[error("not enough ancillas: {needed} needed, {available} available")]
    InsufficientAncillas { needed: usize, available: usize },

    #[error("solve failed: {0}")]
    SolveFailed(String),

    #[error("formula is unsatisfiable")]
    Unsatisfiable,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::SolveFailed(_) | Error::Unsatisfiable => 4,
            _ => 2,
        }
    }
}
