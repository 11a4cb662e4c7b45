use thiserror::Error;

/// Degree vector in the grading monoid, used in error payloads.
pub type DegreeVec = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("map is not invertible")]
    NotInvertible,
    #[error("subspaces do not form a direct sum decomposition")]
    NotDirectSum,
    #[error("algebra is not unital")]
    NotUnital,
    #[error("slices are not (anti)symmetric")]
    NotHermitianSlices,
    #[error("algebra is not generated in the stated degrees (fails at {0:?})")]
    NotGenerated(DegreeVec),
    #[error("inconsistent dimensions in structure constants: {0}")]
    InconsistentDims(String),
    #[error("no extension exists at degree {0:?}")]
    NoExtension(DegreeVec),
    #[error("component function does not stabilize")]
    NotStabilizing,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("budget exceeded: {context} needs {needed}, budget {budget}")]
    BudgetExceeded {
        context: String,
        needed: u128,
        budget: u128,
    },
    #[error("candidate group too large: |G| = {size} exceeds budget {budget}")]
    GTooLarge { size: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub fn budget(context: impl Into<String>, needed: u128, budget: u128) -> Self {
        Error::BudgetExceeded {
            context: context.into(),
            needed,
            budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
