use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node index {index} out of range for rank {rank}")]
    NodeOutOfRange { index: usize, rank: usize },
    #[error("weight has {got} coordinates, expected rank {expected}")]
    RankMismatch { got: usize, expected: usize },
    #[error("not a valid finite-type Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("label {label} is not Levi-dominant for marking {marking}")]
    InvalidLabel { label: String, marking: String },
    #[error("markings live over different Cartan data")]
    CartanMismatch,
    #[error("crossed nodes of the base are not contained in those of the total marking")]
    InclusionViolated,
    #[error("form degree {p} out of range 0..={max}")]
    FormDegreeOutOfRange { p: usize, max: usize },
    #[error("fibration is degenerate: {0}")]
    DegenerateFibration(String),
    #[error("operation requires a Hermitian-holomorphic fibration")]
    NotHermitianHolomorphic,
}

pub type Result<T> = std::result::Result<T, Error>;
