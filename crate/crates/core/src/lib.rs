//! Partial-transpose analysis for a family of bipartite states whose partial
//! transpose splits into a direct sum of small blocks.
//!
//! A family member on `C^dA ⊗ C^dB` is described by a `dA×dA` Hermitian
//! matrix `X` and blocks `M_k` (size `k`) and `N_k` (size `dB−1−k`). Its
//! partial transpose is unitarily equivalent to `X ⊕ ⨁_k (M_kᵀ ⊕ N_kᵀ)`, so
//! only `X` can carry negative eigenvalues.

pub mod analysis;
pub mod document;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod linalg;
pub mod named;
pub mod reorder;
pub mod separability;
pub mod transpose;

pub use analysis::{
    analyze, reorder, sweep, sweep_csv, validate_document, AnalysisReport, EpsGrid, ReorderReport, SweepKind, SweepRow,
};
pub use document::{DocumentKind, MatrixDocument, State};
pub use error::{PptError, Result};
pub use family::{
    assemble, assemble_qubit_qudit, sample_qubit_qudit, sample_random, validate, FamilyParams, QubitQuditParams,
    ValidationReport,
};
pub use linalg::{c64, ComplexMatrix, HermitianMatrix, C64, DEFAULT_TOL};
pub use named::{embed_werner, isotropic, werner, IsotropicSpec, WernerSpec};
pub use separability::{classify, classify_qubit_qudit, Classification, Reason, Verdict};
pub use transpose::{partial_transpose, pt_block_spectrum, BlockSpectrum, NegativityResult};
