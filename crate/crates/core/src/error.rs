use thiserror::Error;

/// Location of a non-finite function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultSite {
    Objective,
    Inequality(usize),
    Equality(usize),
}

impl std::fmt::Display for FaultSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FaultSite::Objective => write!(f, "objective"),
            FaultSite::Inequality(j) => write!(f, "inequality constraint {j}"),
            FaultSite::Equality(j) => write!(f, "equality constraint {j}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem definition `{problem}`: {reason}")]
    InvalidProblem { problem: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite position component at index {0}")]
    NonFinitePosition(usize),

    #[error("problem `{problem}` produced a non-finite value in its {site} at an in-box point")]
    EvaluationFault { problem: String, site: FaultSite },

    #[error("unknown problem `{name}`; valid names: {}", .valid.join(", "))]
    UnknownProblem { name: String, valid: Vec<String> },

    #[error("unknown constraint-handling technique `{name}`; valid names: {}", .valid.join(", "))]
    UnknownCht { name: String, valid: Vec<String> },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("particle {particle} found no feasible position after {attempts} attempts")]
    InitializationFailure { particle: usize, attempts: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
