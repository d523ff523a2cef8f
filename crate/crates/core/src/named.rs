//! Werner and isotropic states.
//!
//! `ρ_W = (1−ε) I/d² + ε F/d` and `ρ_I = (1−ε) I/d² + ε P₊`, with `F` the
//! swap and `P₊` the projector onto `(1/√d) Σ|ii⟩`. Partial transposition
//! maps one form onto the other since `P₊^Γ = F/d`.
//!
//! Validity ranges follow from the spectra: `F` has eigenvalues ±1, so ρ_W is
//! PSD for `ε ∈ [−1/(d−1), 1/(d+1)]`; `P₊` has eigenvalues 0 and 1, so ρ_I is
//! PSD for `ε ∈ [−1/(d²−1), 1]`. Both partial transposes lose positivity at
//! the other family's edge: ρ_W^Γ at `ε = −1/(d²−1)`, ρ_I^Γ at `ε = 1/(d+1)`.
//!
//! The diagonal X entries of the Werner embedding are `⟨kk|ρ_W|kk⟩ =
//! (1−ε)/d² + ε/d`. The expression `(1−ε(d+1))/d²` sometimes quoted for them
//! is the antisymmetric eigenvalue of ρ_W and does not reproduce the state.

use serde::{Deserialize, Serialize};

use crate::error::{PptError, Result};
use crate::family::FamilyParams;
use crate::linalg::{c64, ComplexMatrix, HermitianMatrix};
use crate::transpose::partial_transpose;

/// Slack allowed when checking a parameter against a closed validity range.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerSpec {
    pub d: usize,
    pub eps: f64,
}

impl WernerSpec {
    pub fn valid_range(d: usize) -> (f64, f64) {
        let d = d as f64;
        (-1.0 / (d - 1.0), 1.0 / (d + 1.0))
    }

    /// Parameter at which the partial transpose becomes singular.
    pub fn ppt_threshold(d: usize) -> f64 {
        let d = d as f64;
        -1.0 / (d * d - 1.0)
    }

    pub fn is_valid(&self) -> bool {
        let (lo, hi) = Self::valid_range(self.d);
        self.d >= 2 && self.eps >= lo - RANGE_SLACK && self.eps <= hi + RANGE_SLACK
    }

    pub fn check(&self) -> Result<()> {
        if self.d < 2 {
            return Err(PptError::InvalidParameter(format!(
                "Werner state needs d >= 2, got {}",
                self.d
            )));
        }
        if !self.eps.is_finite() || !self.is_valid() {
            let (lo, hi) = Self::valid_range(self.d);
            return Err(PptError::InvalidParameter(format!(
                "Werner eps must lie in [{lo}, {hi}] for d={}, got {}",
                self.d, self.eps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicSpec {
    pub d: usize,
    pub eps: f64,
}

impl IsotropicSpec {
    pub fn valid_range(d: usize) -> (f64, f64) {
        let d = d as f64;
        (-1.0 / (d * d - 1.0), 1.0)
    }

    pub fn ppt_threshold(d: usize) -> f64 {
        1.0 / (d as f64 + 1.0)
    }

    pub fn is_valid(&self) -> bool {
        let (lo, hi) = Self::valid_range(self.d);
        self.d >= 2 && self.eps >= lo - RANGE_SLACK && self.eps <= hi + RANGE_SLACK
    }

    pub fn check(&self) -> Result<()> {
        if self.d < 2 {
            return Err(PptError::InvalidParameter(format!(
                "isotropic state needs d >= 2, got {}",
                self.d
            )));
        }
        if !self.eps.is_finite() || !self.is_valid() {
            let (lo, hi) = Self::valid_range(self.d);
            return Err(PptError::InvalidParameter(format!(
                "isotropic eps must lie in [{lo}, {hi}] for d={}, got {}",
                self.d, self.eps
            )));
        }
        Ok(())
    }
}

/// Swap operator on `d ⊗ d`: `F[i·d+j][j·d+i] = 1`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = c64(1.0, 0.0);
        }
    }
    f
}

/// `w` on every `|ii⟩⟨jj|` entry.
fn sublattice(d: usize, w: f64) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + i, j * d + j)] = c64(w, 0.0);
        }
    }
    p
}

/// `P₊ = |φ⁺⟩⟨φ⁺|` with entries `1/d` on the `|ii⟩⟨jj|` sublattice.
pub fn max_entangled_projector(d: usize) -> ComplexMatrix {
    sublattice(d, 1.0 / d as f64)
}

/// Adds `(1−ε)/d²` to the diagonal of `op`.
fn plus_identity(d: usize, eps: f64, mut op: ComplexMatrix) -> ComplexMatrix {
    let a = (1.0 - eps) / (d * d) as f64;
    for i in 0..d * d {
        op[(i, i)] += c64(a, 0.0);
    }
    op
}

// Both constructors place the same value `ε/d` on their off-diagonal support,
// so partial transposition maps one onto the other bit-for-bit.

pub fn werner(spec: WernerSpec) -> ComplexMatrix {
    let w = spec.eps / spec.d as f64;
    plus_identity(spec.d, spec.eps, flip_operator(spec.d).scale(w))
}

pub fn isotropic(spec: IsotropicSpec) -> ComplexMatrix {
    let w = spec.eps / spec.d as f64;
    plus_identity(spec.d, spec.eps, sublattice(spec.d, w))
}

/// `ε = −(1 − dΦ)/(d² − 1)` where `Φ = ⟨F⟩`.
pub fn phi_to_eps(phi: f64, d: usize) -> f64 {
    let d = d as f64;
    -(1.0 - d * phi) / (d * d - 1.0)
}

/// Werner state as a family member with `dA = dB = d`.
pub fn embed_werner(d: usize, eps: f64) -> Result<FamilyParams> {
    WernerSpec { d, eps }.check()?;
    let dense = werner(WernerSpec { d, eps });
    // Every X entry is read from the dense state itself, so the embedding
    // reproduces it exactly.
    let mut x = ComplexMatrix::zeros(d);
    for m in 0..d {
        for n in 0..d {
            x[(m, n)] = dense[(m * d + n, n * d + m)];
        }
    }
    let block = |size: usize| HermitianMatrix::identity(size).scale((1.0 - eps) / (d * d) as f64);
    FamilyParams::new(
        d,
        d,
        HermitianMatrix::new(x)?,
        (0..d).map(block).collect(),
        (0..d).map(|k| block(d - 1 - k)).collect(),
    )
}

/// Recovers `ε` when `p` is an embedded Werner state (within `tol`).
pub fn match_werner(p: &FamilyParams, tol: f64) -> Option<f64> {
    let d = p.d_a();
    if p.d_b() != d {
        return None;
    }
    let x = p.x();
    let eps = x[(0, 1)].re * d as f64;
    if !(WernerSpec { d, eps }).is_valid() {
        return None;
    }
    let base = (1.0 - eps) / (d * d) as f64;
    let off = eps / d as f64;
    for m in 0..d {
        for n in 0..d {
            let expected = if m == n { base + off } else { off };
            if (x[(m, n)] - c64(expected, 0.0)).norm() > tol {
                return None;
            }
        }
    }
    let blocks_match = p.m().iter().chain(p.n()).all(|b| {
        (0..b.dim()).all(|r| {
            (0..b.dim()).all(|c| {
                let expected = if r == c { base } else { 0.0 };
                (b[(r, c)] - c64(expected, 0.0)).norm() <= tol
            })
        })
    });
    blocks_match.then_some(eps)
}

/// Checks `ρ_I^Γ = (1−ε) I/d² + (ε/d) F` entrywise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityCheck {
    pub holds: bool,
    pub max_deviation: f64,
}

pub fn isotropic_werner_duality(d: usize, eps: f64) -> Result<DualityCheck> {
    if d < 2 {
        return Err(PptError::InvalidParameter(format!(
            "duality check needs d >= 2, got {d}"
        )));
    }
    let pt = partial_transpose(&isotropic(IsotropicSpec { d, eps }), d, d)?;
    let dev = pt.max_abs_diff(&werner(WernerSpec { d, eps }))?;
    Ok(DualityCheck {
        holds: dev == 0.0,
        max_deviation: dev,
    })
}
