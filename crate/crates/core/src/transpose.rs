//! Partial transposition on Bob's subsystem and the block-wise PT spectrum.
//!
//! For a family member the partial transpose splits as
//! `ρ^Γ = X ⊕ ⨁_k (M_kᵀ ⊕ N_kᵀ)`, so its spectrum can be read off the small
//! blocks without touching the `dA·dB` matrix. Since every `M_k`, `N_k` is a
//! principal submatrix of a PSD `ρ`, negative PT eigenvalues can only come
//! from `X`.

use serde::Serialize;

use crate::error::{PptError, Result};
use crate::family::{assemble, assemble_qubit_qudit, FamilyParams, QubitQuditParams};
use crate::linalg::{hermitian_eigenvalues, max_sorted_deviation, ComplexMatrix, HermitianMatrix, C64};

/// Largest sorted-spectrum deviation accepted by [`verify_direct_sum`].
pub const DIRECT_SUM_TOL: f64 = 1e-9;

/// `ρ^Γ[i·dB+r][j·dB+c] = ρ[i·dB+c][j·dB+r]`.
pub fn partial_transpose(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<ComplexMatrix> {
    if rho.dim() != d_a * d_b || d_a == 0 || d_b == 0 {
        return Err(PptError::DimensionMismatch(format!(
            "matrix is {0}x{0}, expected {1}x{1} for dA={d_a}, dB={d_b}",
            rho.dim(),
            d_a * d_b
        )));
    }
    let mut out = ComplexMatrix::zeros(rho.dim());
    for i in 0..d_a {
        for j in 0..d_a {
            for r in 0..d_b {
                for c in 0..d_b {
                    out[(i * d_b + r, j * d_b + c)] = rho[(i * d_b + c, j * d_b + r)];
                }
            }
        }
    }
    Ok(out)
}

/// Spectrum of the partial transpose of the Hermitian `rho`, ascending.
pub fn dense_pt_spectrum(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<Vec<f64>> {
    let pt = partial_transpose(rho, d_a, d_b)?;
    hermitian_eigenvalues(&HermitianMatrix::new(pt)?)
}

/// PT eigenvalues grouped by the block they come from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSpectrum {
    pub x_eigs: Vec<f64>,
    pub m_eigs: Vec<Vec<f64>>,
    pub n_eigs: Vec<Vec<f64>>,
}

impl BlockSpectrum {
    pub fn len(&self) -> usize {
        self.x_eigs.len()
            + self.m_eigs.iter().map(Vec::len).sum::<usize>()
            + self.n_eigs.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All eigenvalues, sorted ascending.
    pub fn all_sorted(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .x_eigs
            .iter()
            .chain(self.m_eigs.iter().flatten())
            .chain(self.n_eigs.iter().flatten())
            .copied()
            .collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Smallest eigenvalue among the M/N blocks (`+∞` when there are none).
    pub fn min_block_eigenvalue(&self) -> f64 {
        self.m_eigs
            .iter()
            .chain(&self.n_eigs)
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Block spectrum of a family member. `X` and `Xᵀ` share a spectrum, as do
/// `M_k` and `M_kᵀ`, so the blocks are diagonalized as stored.
pub fn pt_block_spectrum(p: &FamilyParams) -> Result<BlockSpectrum> {
    Ok(BlockSpectrum {
        x_eigs: hermitian_eigenvalues(p.x())?,
        m_eigs: p.m().iter().map(hermitian_eigenvalues).collect::<Result<_>>()?,
        n_eigs: p.n().iter().map(hermitian_eigenvalues).collect::<Result<_>>()?,
    })
}

/// Block spectrum of a qubit-qudit member: `X` on span{|00⟩,|1,dB−1⟩}, `A`
/// on Alice |0⟩ (reported as `n_eigs[0]`), `B` on Alice |1⟩ (`m_eigs[1]`).
pub fn qubit_qudit_block_spectrum(q: &QubitQuditParams) -> Result<BlockSpectrum> {
    Ok(BlockSpectrum {
        x_eigs: hermitian_eigenvalues(&q.x_matrix())?,
        m_eigs: vec![Vec::new(), hermitian_eigenvalues(q.b())?],
        n_eigs: vec![hermitian_eigenvalues(q.a())?, Vec::new()],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityResult {
    pub negativity: f64,
    pub negative_eigenvalues: Vec<f64>,
    pub is_ppt: bool,
}

/// Sum of `|λ|` over eigenvalues below `−tol`.
pub fn negativity_of_eigenvalues(eigs: &[f64], tol: f64) -> NegativityResult {
    let negative_eigenvalues: Vec<f64> = eigs.iter().copied().filter(|&l| l < -tol).collect();
    NegativityResult {
        negativity: negative_eigenvalues.iter().fold(0.0, |acc, l| acc + l.abs()),
        is_ppt: negative_eigenvalues.is_empty(),
        negative_eigenvalues,
    }
}

/// Negativity from a block spectrum; only `X` can contribute for a valid state.
pub fn negativity(spec: &BlockSpectrum, tol: f64) -> NegativityResult {
    negativity_of_eigenvalues(&spec.x_eigs, tol)
}

/// Two-qubit closed form `½·max{0, √((x00−x11)² + 4|x01|²) − (x00+x11)}`.
pub fn two_qubit_negativity(x00: f64, x11: f64, x01: C64) -> f64 {
    let root = ((x00 - x11).powi(2) + 4.0 * x01.norm_sqr()).sqrt();
    0.5 * (root - (x00 + x11)).max(0.0)
}

/// Compares the block spectrum against the dense PT spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectSumCheck {
    pub verified: bool,
    pub max_deviation: f64,
}

pub fn verify_direct_sum(p: &FamilyParams) -> Result<DirectSumCheck> {
    let fast = pt_block_spectrum(p)?.all_sorted();
    let dense = dense_pt_spectrum(&assemble(p), p.d_a(), p.d_b())?;
    let max_deviation = max_sorted_deviation(&fast, &dense).expect("both spectra have dA*dB values");
    Ok(DirectSumCheck {
        verified: max_deviation <= DIRECT_SUM_TOL,
        max_deviation,
    })
}

pub fn verify_direct_sum_qubit_qudit(q: &QubitQuditParams) -> Result<DirectSumCheck> {
    let fast = qubit_qudit_block_spectrum(q)?.all_sorted();
    let dense = dense_pt_spectrum(&assemble_qubit_qudit(q), 2, q.d_b())?;
    let max_deviation = max_sorted_deviation(&fast, &dense).expect("both spectra have 2*dB values");
    Ok(DirectSumCheck {
        verified: max_deviation <= DIRECT_SUM_TOL,
        max_deviation,
    })
}
