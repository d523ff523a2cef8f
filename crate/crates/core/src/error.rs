use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PptError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {threshold:e}")]
    NotHermitian { asymmetry: f64, threshold: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("indices must be strictly increasing")]
    UnorderedIndices,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e}, target {target:e})")]
    NoConvergence { sweeps: usize, off_norm: f64, target: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not simply separable: off-diagonal block entry {max_entry:e} exceeds {tol:e}")]
    NotSimplySeparable { max_entry: f64, tol: f64 },

    #[error("input is not family-structured: {0}")]
    NotFamilyStructured(String),

    #[error("malformed document: {0}")]
    Document(String),
}

impl PptError {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, PptError::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, PptError>;
