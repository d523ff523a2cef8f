//! Reports combining validation, spectra, negativity and classification.

use serde::Serialize;

use crate::document::{DocumentKind, MatrixDocument, State};
use crate::error::{PptError, Result};
use crate::family::{
    validate, validate_family_matrix, validate_matrix, validate_qubit_qudit, FamilyParams, ValidationReport,
};
use crate::linalg::max_sorted_deviation;
use crate::named::{embed_werner, IsotropicSpec, WernerSpec};
use crate::reorder::{
    apply_permutation, qubit_qudit_partition, verify_block_diagonal, BasisPermutation, BlockDiagonalCheck,
};
use crate::separability::{
    classify, classify_dense, classify_isotropic, classify_qubit_qudit, subspace_partition, BlockPartition,
    Classification, Reason, Verdict,
};
use crate::transpose::{
    dense_pt_spectrum, negativity_of_eigenvalues, partial_transpose, pt_block_spectrum, qubit_qudit_block_spectrum,
    BlockSpectrum, DirectSumCheck, DIRECT_SUM_TOL,
};

/// Largest dimension for which the dense spectrum is always computed.
pub const DENSE_SPECTRUM_MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationSummary {
    pub verdict: Verdict,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub kind: DocumentKind,
    pub dims: [usize; 2],
    pub validation: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_spectrum: Option<BlockSpectrum>,
    /// Ascending spectrum of the dense partial transpose.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_spectrum: Option<Vec<f64>>,
    pub negativity: f64,
    pub negative_eigenvalues: Vec<f64>,
    pub is_ppt: bool,
    pub classification: ClassificationSummary,
    /// Block spectrum against dense spectrum; absent when either is missing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_sum_verified: Option<DirectSumCheck>,
}

/// A family-structured view of the input, if it has one.
enum Structured {
    Family(FamilyParams),
    QubitQudit(crate::family::QubitQuditParams),
}

fn structured(state: &State, tol: f64) -> Result<Option<Structured>> {
    Ok(match state {
        State::Family(p) => Some(Structured::Family(p.clone())),
        State::QubitQudit(q) => Some(Structured::QubitQudit(q.clone())),
        State::Werner(s) => Some(Structured::Family(embed_werner(s.d, s.eps)?)),
        State::Dense { rho, d_a, d_b } => {
            if *d_a >= 2 && d_a <= d_b {
                FamilyParams::from_dense(rho, *d_a, *d_b, tol)
                    .ok()
                    .map(Structured::Family)
            } else {
                None
            }
        }
        State::Isotropic(_) => None,
    })
}

fn direct_sum(blocks: &BlockSpectrum, dense: &Option<Vec<f64>>) -> Option<DirectSumCheck> {
    let dense = dense.as_ref()?;
    let max_deviation = max_sorted_deviation(&blocks.all_sorted(), dense)?;
    Some(DirectSumCheck {
        verified: max_deviation <= DIRECT_SUM_TOL,
        max_deviation,
    })
}

pub fn analyze(doc: &MatrixDocument, tol: f64) -> Result<AnalysisReport> {
    let state = doc.to_state()?;
    let (d_a, d_b) = state.dims();
    let rho = state.to_dense();
    let dim = d_a * d_b;
    let dense_spectrum = |force: bool| -> Result<Option<Vec<f64>>> {
        if force || dim <= DENSE_SPECTRUM_MAX_DIM {
            dense_pt_spectrum(&rho, d_a, d_b).map(Some)
        } else {
            Ok(None)
        }
    };

    let (validation, block_spectrum, dense, classification): (_, _, _, Classification) = match structured(&state, tol)?
    {
        Some(Structured::Family(p)) => {
            let validation = match &state {
                State::Dense { .. } => validate_family_matrix(&rho, d_a, d_b, tol)?,
                _ => validate(&p, tol)?,
            };
            let blocks = pt_block_spectrum(&p)?;
            (validation, Some(blocks), dense_spectrum(false)?, classify(&p, tol)?)
        }
        Some(Structured::QubitQudit(q)) => {
            let blocks = qubit_qudit_block_spectrum(&q)?;
            (
                validate_qubit_qudit(&q, tol)?,
                Some(blocks),
                dense_spectrum(false)?,
                classify_qubit_qudit(&q, tol)?,
            )
        }
        None => {
            let classification = match &state {
                State::Isotropic(s) => classify_isotropic(&rho, s.d, tol)?,
                _ => classify_dense(&rho, d_a, d_b, tol)?,
            };
            (validate_matrix(&rho, tol)?, None, dense_spectrum(true)?, classification)
        }
    };

    let eigs = match (&block_spectrum, &dense) {
        (Some(b), _) => b.all_sorted(),
        (None, Some(d)) => d.clone(),
        (None, None) => unreachable!("dense spectrum is forced without a block spectrum"),
    };
    let neg = negativity_of_eigenvalues(&eigs, tol);
    let direct_sum_verified = block_spectrum.as_ref().and_then(|b| direct_sum(b, &dense));

    Ok(AnalysisReport {
        kind: doc.kind(),
        dims: [d_a, d_b],
        validation,
        block_spectrum,
        dense_spectrum: dense,
        negativity: neg.negativity,
        negative_eigenvalues: neg.negative_eigenvalues,
        is_ppt: neg.is_ppt,
        classification: ClassificationSummary {
            verdict: classification.verdict,
            reason: classification.reason,
        },
        direct_sum_verified,
    })
}

/// Hermiticity, trace and positivity of the described state. Family-shaped
/// inputs also report whether the sparsity pattern holds.
pub fn validate_document(doc: &MatrixDocument, tol: f64) -> Result<ValidationReport> {
    let state = doc.to_state()?;
    match &state {
        State::Family(p) => validate(p, tol),
        State::QubitQudit(q) => validate_qubit_qudit(q, tol),
        State::Dense { rho, d_a, d_b } if *d_a >= 2 && d_a <= d_b => validate_family_matrix(rho, *d_a, *d_b, tol),
        _ => validate_matrix(&state.to_dense(), tol),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReorderReport {
    /// The partial transpose in the reordered basis, as a dense document.
    pub document: MatrixDocument,
    pub permutation: BasisPermutation,
    pub block_sizes: Vec<usize>,
    #[serde(flatten)]
    pub check: BlockDiagonalCheck,
}

/// Reorders `ρ^Γ` into its diagonal blocks. Input must be family-structured.
pub fn reorder(doc: &MatrixDocument, tol: f64) -> Result<ReorderReport> {
    let state = doc.to_state()?;
    let (d_a, d_b) = state.dims();
    let partition: BlockPartition = match structured(&state, tol)? {
        Some(Structured::Family(p)) => subspace_partition(p.d_a(), p.d_b()),
        Some(Structured::QubitQudit(q)) => qubit_qudit_partition(q.d_b()),
        None => {
            return Err(PptError::NotFamilyStructured(format!(
                "{:?} input with dims {d_a}x{d_b} does not fit the family pattern",
                doc.kind()
            )))
        }
    };
    let pt = partial_transpose(&state.to_dense(), d_a, d_b)?;
    let permutation = BasisPermutation::from(&partition);
    let reordered = apply_permutation(&pt, &permutation)?;
    let block_sizes = partition.sizes();
    let check = verify_block_diagonal(&reordered, &block_sizes, tol)?;
    Ok(ReorderReport {
        document: MatrixDocument::dense(&reordered, d_a, d_b),
        permutation,
        block_sizes,
        check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Werner,
    Isotropic,
}

impl SweepKind {
    pub fn valid_range(self, d: usize) -> (f64, f64) {
        match self {
            SweepKind::Werner => WernerSpec::valid_range(d),
            SweepKind::Isotropic => IsotropicSpec::valid_range(d),
        }
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl EpsGrid {
    pub fn full_range(kind: SweepKind, d: usize, count: usize) -> Self {
        let (start, stop) = kind.valid_range(d);
        Self { start, stop, count }
    }

    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.stop
                        } else {
                            self.start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

impl std::str::FromStr for EpsGrid {
    type Err = PptError;

    /// Parses `start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || PptError::InvalidParameter(format!("grid must be start:stop:count, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(bad());
        };
        let start: f64 = start.trim().parse().map_err(|_| bad())?;
        let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        if !start.is_finite() || !stop.is_finite() || count == 0 {
            return Err(bad());
        }
        Ok(Self { start, stop, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub min_pt_eigenvalue: f64,
    pub negativity: f64,
    pub verdict: Verdict,
}

pub fn sweep(kind: SweepKind, d: usize, grid: &EpsGrid, tol: f64) -> Result<Vec<SweepRow>> {
    let points = grid.points();
    for &eps in &points {
        match kind {
            SweepKind::Werner => WernerSpec { d, eps }.check()?,
            SweepKind::Isotropic => IsotropicSpec { d, eps }.check()?,
        }
    }
    points
        .into_iter()
        .map(|eps| {
            let state = match kind {
                SweepKind::Werner => State::Werner(WernerSpec { d, eps }),
                SweepKind::Isotropic => State::Isotropic(IsotropicSpec { d, eps }),
            };
            let eigs = dense_pt_spectrum(&state.to_dense(), d, d)?;
            let neg = negativity_of_eigenvalues(&eigs, tol);
            let classification = match kind {
                SweepKind::Werner => classify(&embed_werner(d, eps)?, tol)?,
                SweepKind::Isotropic => classify_isotropic(&state.to_dense(), d, tol)?,
            };
            Ok(SweepRow {
                eps,
                min_pt_eigenvalue: eigs[0],
                negativity: neg.negativity,
                verdict: classification.verdict,
            })
        })
        .collect()
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NptEntangled => "NPT_ENTANGLED",
            Verdict::PptSeparable => "PPT_SEPARABLE",
            Verdict::PptUndecided => "PPT_UNDECIDED",
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("eps,min_pt_eigenvalue,negativity,verdict\n");
    for r in rows {
        out.push_str(&format!(
            "{:?},{:?},{:?},{}\n",
            r.eps,
            r.min_pt_eigenvalue,
            r.negativity,
            r.verdict.as_str()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::sample_random;
    use crate::fixtures::{d4_example, D4_BLOCK_SIZES};
    use crate::linalg::{c64, ComplexMatrix, HermitianMatrix, DEFAULT_TOL};

    fn doc_of(state: State) -> MatrixDocument {
        state.to_document()
    }

    #[test]
    fn singlet_report() {
        let r = analyze(&doc_of(State::Werner(WernerSpec { d: 2, eps: -1.0 })), DEFAULT_TOL).unwrap();
        assert!((r.negativity - 0.5).abs() < 1e-10);
        assert_eq!(r.classification.verdict, Verdict::NptEntangled);
        assert!(r.direct_sum_verified.unwrap().verified);
        assert!(r.validation.overall);
    }

    #[test]
    fn two_qubit_family_report() {
        let p = FamilyParams::new(
            2,
            2,
            HermitianMatrix::from_real_rows(&[&[0.125, 0.25], &[0.25, 0.125]]).unwrap(),
            vec![HermitianMatrix::zeros(0), HermitianMatrix::from_diagonal(&[0.375])],
            vec![HermitianMatrix::from_diagonal(&[0.375]), HermitianMatrix::zeros(0)],
        )
        .unwrap();
        let r = analyze(&doc_of(State::Family(p)), DEFAULT_TOL).unwrap();
        assert!((r.negativity - 0.125).abs() < 1e-14);
        assert!(!r.is_ppt);
    }

    #[test]
    fn simply_separable_sample_report() {
        let r = analyze(
            &doc_of(State::Family(sample_random(3, 4, 2, 0.0).unwrap())),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(r.negativity, 0.0);
        assert_eq!(r.classification.verdict, Verdict::PptSeparable);
    }

    #[test]
    fn dense_input_in_family_pattern_gets_block_spectrum() {
        let p = d4_example();
        let dense = State::Dense {
            rho: crate::family::assemble(&p),
            d_a: 4,
            d_b: 4,
        };
        let r = analyze(&doc_of(dense), DEFAULT_TOL).unwrap();
        assert!(r.block_spectrum.is_some());
        assert_eq!(r.validation.pattern_ok, Some(true));
        assert!(r.direct_sum_verified.unwrap().verified);
    }

    #[test]
    fn isotropic_reports() {
        let r = analyze(&doc_of(State::Isotropic(IsotropicSpec { d: 3, eps: 1.0 })), DEFAULT_TOL).unwrap();
        assert_eq!(r.classification.verdict, Verdict::NptEntangled);
        assert!((r.negativity - 1.0).abs() < 1e-12);
        assert!(r.block_spectrum.is_none());
        let r = analyze(&doc_of(State::Isotropic(IsotropicSpec { d: 3, eps: 0.1 })), DEFAULT_TOL).unwrap();
        assert_eq!(r.classification.reason, Reason::Werner);
    }

    #[test]
    fn generic_dense_is_undecided_or_npt() {
        // Maximally mixed plus a coherence between |00⟩ and |12⟩: off the family pattern.
        let mut rho = ComplexMatrix::identity(6).scale(1.0 / 6.0);
        rho[(0, 5)] = c64(0.01, 0.0);
        rho[(5, 0)] = c64(0.01, 0.0);
        let r = analyze(&MatrixDocument::dense(&rho, 2, 3), DEFAULT_TOL).unwrap();
        assert!(r.block_spectrum.is_none());
        assert_eq!(r.classification.verdict, Verdict::PptUndecided);
        assert!(reorder(&MatrixDocument::dense(&rho, 2, 3), DEFAULT_TOL).is_err());
    }

    #[test]
    fn reorder_d4() {
        let r = reorder(&doc_of(State::Family(d4_example())), DEFAULT_TOL).unwrap();
        assert_eq!(r.block_sizes, D4_BLOCK_SIZES.to_vec());
        assert_eq!(r.check.max_off_block, 0.0);
        assert!(r.check.block_diagonal);
    }

    #[test]
    fn grid_parsing() {
        let g: EpsGrid = "-1:0.3333333333333333:41".parse().unwrap();
        assert_eq!(g.count, 41);
        let pts = g.points();
        assert_eq!(pts[0], -1.0);
        assert_eq!(pts[40], 0.3333333333333333);
        for bad in ["1:2", "a:1:3", "0:1:0", "0:1:3:4", "nan:1:3"] {
            assert!(bad.parse::<EpsGrid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_crossings() {
        for (kind, d, edge) in [(SweepKind::Werner, 2, -1.0 / 3.0), (SweepKind::Isotropic, 3, 0.25)] {
            let grid = EpsGrid::full_range(kind, d, 200);
            let rows = sweep(kind, d, &grid, DEFAULT_TOL).unwrap();
            let step = (grid.stop - grid.start) / 199.0;
            let flips: Vec<f64> = rows
                .windows(2)
                .filter(|w| (w[0].min_pt_eigenvalue < -DEFAULT_TOL) != (w[1].min_pt_eigenvalue < -DEFAULT_TOL))
                .map(|w| 0.5 * (w[0].eps + w[1].eps))
                .collect();
            assert_eq!(flips.len(), 1, "{kind:?}");
            assert!((flips[0] - edge).abs() <= step);
        }
    }

    #[test]
    fn sweep_rejects_out_of_range() {
        let grid = EpsGrid {
            start: -2.0,
            stop: 0.0,
            count: 5,
        };
        assert!(sweep(SweepKind::Werner, 2, &grid, DEFAULT_TOL).is_err());
    }

    #[test]
    fn zero_eps_row() {
        let grid = EpsGrid {
            start: 0.0,
            stop: 0.0,
            count: 1,
        };
        for kind in [SweepKind::Werner, SweepKind::Isotropic] {
            let rows = sweep(kind, 3, &grid, DEFAULT_TOL).unwrap();
            assert_eq!(rows[0].negativity, 0.0);
        }
        let csv = sweep_csv(&sweep(SweepKind::Werner, 2, &grid, DEFAULT_TOL).unwrap());
        assert_eq!(csv.lines().next().unwrap(), "eps,min_pt_eigenvalue,negativity,verdict");
        assert!(csv.lines().nth(1).unwrap().starts_with("0.0,"));
    }
}
