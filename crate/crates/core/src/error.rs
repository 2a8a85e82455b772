use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("invalid Pauli text {text:?}: {reason}")]
    PauliParse { text: String, reason: String },

    #[error("operator {0} is not Hermitian")]
    NotHermitian(String),

    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),

    /// An operation received a gate of the wrong kind, e.g. a Clifford
    /// rotation passed to the sparse propagator.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("term budget of {0} exceeded")]
    TermBudget(usize),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("invalid observable: {0}")]
    Observable(String),

    #[error("state vector of {0} qubits exceeds the dense simulator cap of {cap}", cap = crate::oracle::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
