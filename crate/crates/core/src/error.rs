use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("could not parse interval-set literal `{0}`")]
    InvalidLiteral(String),

    #[error("universe must be nonempty")]
    EmptyUniverse,

    #[error("set {set} is not contained in the universe {universe}")]
    OutsideUniverse { set: String, universe: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("unbound constant `{0}`")]
    UnboundConstant(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} needs {requested}, which exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("set {0} is not a union of partition cells")]
    NotCellRepresentable(String),

    #[error("matrix entry ({row}, {col}) is neither empty nor the universe")]
    NotUniverseOrEmpty { row: usize, col: usize },

    #[error("state is not an equilibrium of the map")]
    NotAnEquilibrium,

    #[error("map is not contractive")]
    NotContractive,

    #[error("orbit did not close within {0} steps")]
    OrbitNotClosed(usize),

    #[error("system is not linear: {0}")]
    NotLinear(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a configured enumeration or size cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
