//! Reference states used by tests, the acceptance suite and the CLI.

use crate::family::FamilyParams;
use crate::linalg::{c64, ComplexMatrix, HermitianMatrix, C64};

fn herm(diag: &[f64], upper: &[(usize, usize, C64)]) -> HermitianMatrix {
    let mut m = ComplexMatrix::from_diagonal(diag);
    for &(r, c, z) in upper {
        m[(r, c)] = z;
        m[(c, r)] = z.conj();
    }
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

/// A 4⊗4 reference member with every block entry given a distinct value.
///
/// Block names follow the usual labelling: `A = N_0` (3×3), `b1 = M_1`,
/// `B = N_1` (2×2), `C = M_2` (2×2), `c3 = N_2`, `D = M_3` (3×3). The
/// values are diagonally dominant, so the state is valid after the final
/// trace normalization.
pub fn d4_example() -> FamilyParams {
    let x = herm(
        &[0.30, 0.26, 0.22, 0.34],
        &[
            (0, 1, c64(0.031, 0.012)),
            (0, 2, c64(-0.024, 0.017)),
            (0, 3, c64(0.015, -0.028)),
            (1, 2, c64(0.027, 0.009)),
            (1, 3, c64(-0.013, -0.021)),
            (2, 3, c64(0.019, 0.025)),
        ],
    );
    let a = herm(
        &[0.41, 0.37, 0.33],
        &[
            (0, 1, c64(0.041, 0.013)),
            (1, 2, c64(-0.022, 0.036)),
            (0, 2, c64(0.018, -0.011)),
        ],
    );
    let b1 = herm(&[0.29], &[]);
    let b = herm(&[0.35, 0.39], &[(0, 1, c64(0.044, -0.016))]);
    let c = herm(&[0.43, 0.31], &[(0, 1, c64(-0.033, 0.027))]);
    let c3 = herm(&[0.27], &[]);
    let d = herm(
        &[0.38, 0.32, 0.36],
        &[
            (0, 1, c64(0.014, 0.039)),
            (1, 2, c64(0.029, -0.008)),
            (0, 2, c64(-0.017, -0.023)),
        ],
    );
    let raw = FamilyParams::new(
        4,
        4,
        x,
        vec![HermitianMatrix::zeros(0), b1, c, d],
        vec![a, b, c3, HermitianMatrix::zeros(0)],
    )
    .expect("consistent dimensions");
    let t = raw.block_trace();
    FamilyParams::new(
        4,
        4,
        raw.x().scale(1.0 / t),
        raw.m().iter().map(|m| m.scale(1.0 / t)).collect(),
        raw.n().iter().map(|n| n.scale(1.0 / t)).collect(),
    )
    .expect("consistent dimensions")
}

/// SCB indices of the 4⊗4 example in the reordered basis
/// `|00⟩,|11⟩,|22⟩,|33⟩,|01⟩,|02⟩,|03⟩,|10⟩,|12⟩,|13⟩,|20⟩,|21⟩,|23⟩,|30⟩,|31⟩,|32⟩`.
pub const D4_REORDERED_BASIS: [usize; 16] = [0, 5, 10, 15, 1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14];

/// Diagonal block sizes of the reordered partial transpose of the 4⊗4 example:
/// X, A, b1, B, C, c3, D.
pub const D4_BLOCK_SIZES: [usize; 7] = [4, 3, 1, 2, 2, 1, 3];
