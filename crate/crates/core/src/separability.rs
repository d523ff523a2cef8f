//! Simply separable states and the PPT-classifiable subfamilies.
//!
//! A state that is block diagonal in Alice's index, `ρ = Σ_i |i⟩⟨i| ⊗ A_i`,
//! is separable with the explicit decomposition
//! `Σ_i tr(A_i) · |i⟩⟨i| ⊗ A_i / tr(A_i)`. The classifier certifies PPT
//! family members as separable when PPT forces them into that form, when
//! the X block lives in a low-dimensional product subspace, or when the
//! state is a Werner state.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{PptError, Result};
use crate::family::{assemble, assemble_qubit_qudit, FamilyParams, QubitQuditParams};
use crate::linalg::{c64, tensor_product, ComplexMatrix, HermitianMatrix};
use crate::named::match_werner;
use crate::transpose::{
    negativity, negativity_of_eigenvalues, partial_transpose, pt_block_spectrum, qubit_qudit_block_spectrum,
};

/// Largest product subspace on which every PPT state is known to be separable.
pub const MAX_PRODUCT_SUBSPACE_DIM: usize = 6;

fn check_dims(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<()> {
    if rho.dim() != d_a * d_b || d_a == 0 || d_b == 0 {
        return Err(PptError::DimensionMismatch(format!(
            "matrix is {0}x{0}, expected {1}x{1} for dA={d_a}, dB={d_b}",
            rho.dim(),
            d_a * d_b
        )));
    }
    Ok(())
}

/// Largest modulus in any off-diagonal `dB×dB` Alice block.
fn max_off_block(rho: &ComplexMatrix, d_b: usize) -> f64 {
    let n = rho.dim();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            if r / d_b != c / d_b {
                worst = worst.max(rho[(r, c)].norm());
            }
        }
    }
    worst
}

pub fn is_simply_separable(rho: &ComplexMatrix, d_a: usize, d_b: usize, tol: f64) -> Result<bool> {
    check_dims(rho, d_a, d_b)?;
    Ok(max_off_block(rho, d_b) <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableTerm {
    pub weight: f64,
    #[serde(skip)]
    pub alice: ComplexMatrix,
    #[serde(skip)]
    pub bob: ComplexMatrix,
    /// Alice's basis state `|i⟩` for this term.
    pub alice_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableDecomposition {
    pub terms: Vec<SeparableTerm>,
}

impl SeparableDecomposition {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `Σ p_i · alice_i ⊗ bob_i`.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let first = self.terms.first()?;
        let dim = first.alice.dim() * first.bob.dim();
        let mut out = ComplexMatrix::zeros(dim);
        for t in &self.terms {
            out = out.add(&tensor_product(&t.alice, &t.bob).scale(t.weight)).ok()?;
        }
        Some(out)
    }
}

/// Explicit product decomposition of a simply separable state. Blocks with
/// trace at most `tol` are dropped.
pub fn decompose_simply_separable(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    tol: f64,
) -> Result<SeparableDecomposition> {
    check_dims(rho, d_a, d_b)?;
    let worst = max_off_block(rho, d_b);
    if worst > tol {
        return Err(PptError::NotSimplySeparable { max_entry: worst, tol });
    }
    let mut terms = Vec::new();
    for i in 0..d_a {
        let mut block = ComplexMatrix::zeros(d_b);
        for r in 0..d_b {
            for c in 0..d_b {
                block[(r, c)] = rho[(i * d_b + r, i * d_b + c)];
            }
        }
        let weight = block.trace().re;
        if weight <= tol {
            continue;
        }
        let mut alice = ComplexMatrix::zeros(d_a);
        alice[(i, i)] = c64(1.0, 0.0);
        terms.push(SeparableTerm {
            weight,
            alice,
            bob: block.scale(1.0 / weight),
            alice_index: i,
        });
    }
    Ok(SeparableDecomposition { terms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum XPattern {
    Null,
    Diagonal,
    /// `⨁ [[0, x_i], [x_i*, 0]]` on consecutive pairs.
    #[serde(rename = "ANTIDIAG_2x2")]
    Antidiag2x2,
    /// `⨁ [[0, x_i], [x_i*, y_i]]` on consecutive pairs.
    #[serde(rename = "LOWER_2x2")]
    Lower2x2,
    General,
}

pub fn x_pattern(x: &HermitianMatrix, tol: f64) -> XPattern {
    let n = x.dim();
    let small = |r: usize, c: usize| x[(r, c)].norm() <= tol;
    if (0..n).all(|r| (0..n).all(|c| small(r, c))) {
        return XPattern::Null;
    }
    if (0..n).all(|r| (0..n).all(|c| r == c || small(r, c))) {
        return XPattern::Diagonal;
    }
    if !n.is_multiple_of(2) {
        return XPattern::General;
    }
    // Off the 2×2 diagonal blocks everything must vanish, and each block's
    // top-left entry must be zero.
    let paired = (0..n).all(|r| (0..n).all(|c| r / 2 == c / 2 || small(r, c)));
    if !paired || !(0..n).step_by(2).all(|k| small(k, k)) {
        return XPattern::General;
    }
    if (1..n).step_by(2).all(|k| small(k, k)) {
        XPattern::Antidiag2x2
    } else {
        XPattern::Lower2x2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NptEntangled,
    PptSeparable,
    PptUndecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    XNullForced,
    XDiagonal,
    SimplySeparable,
    #[serde(rename = "PRODUCT_SUBSPACE_DIM_LE_6")]
    ProductSubspaceDimLe6,
    Werner,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub is_ppt: bool,
    pub verdict: Verdict,
    pub reason: Reason,
    pub negativity: f64,
}

impl Classification {
    fn npt(negativity: f64) -> Self {
        Self {
            is_ppt: false,
            verdict: Verdict::NptEntangled,
            reason: Reason::None,
            negativity,
        }
    }

    fn ppt(reason: Option<Reason>, negativity: f64) -> Self {
        match reason {
            Some(reason) => Self {
                is_ppt: true,
                verdict: Verdict::PptSeparable,
                reason,
                negativity,
            },
            None => Self {
                is_ppt: true,
                verdict: Verdict::PptUndecided,
                reason: Reason::None,
                negativity,
            },
        }
    }
}

/// Index sets of a `dA ⊗ dB` basis that span a product subspace `A' ⊗ B'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSubspace {
    pub alice: BTreeSet<usize>,
    pub bob: BTreeSet<usize>,
}

impl ProductSubspace {
    pub fn dim(&self) -> usize {
        self.alice.len() * self.bob.len()
    }
}

/// Smallest product subspace containing `seed` that `pt` leaves invariant,
/// provided it has dimension at most 6 and the rest of `pt` is block diagonal
/// in Alice's index.
///
/// When this succeeds, `pt` splits into a state on a 2⊗2 or 2⊗3 product
/// space (separable iff PPT) plus a simply separable remainder.
pub fn product_subspace_rule(
    pt: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    seed: &[(usize, usize)],
    tol: f64,
) -> Option<ProductSubspace> {
    let mut sub = ProductSubspace {
        alice: seed.iter().map(|&(a, _)| a).collect(),
        bob: seed.iter().map(|&(_, b)| b).collect(),
    };
    let n = d_a * d_b;
    loop {
        if sub.dim() > MAX_PRODUCT_SUBSPACE_DIM {
            return None;
        }
        let mut grown = false;
        for &a in &sub.alice.clone() {
            for &b in &sub.bob.clone() {
                let row = a * d_b + b;
                for col in 0..n {
                    if pt[(row, col)].norm() > tol {
                        grown |= sub.alice.insert(col / d_b);
                        grown |= sub.bob.insert(col % d_b);
                    }
                }
            }
        }
        if !grown {
            break;
        }
    }
    let inside = |i: usize| sub.alice.contains(&(i / d_b)) && sub.bob.contains(&(i % d_b));
    for r in 0..n {
        for c in 0..n {
            if !inside(r) && !inside(c) && r / d_b != c / d_b && pt[(r, c)].norm() > tol {
                return None;
            }
        }
    }
    Some(sub)
}

fn x_support(x: &HermitianMatrix, tol: f64) -> Vec<usize> {
    (0..x.dim())
        .filter(|&k| (0..x.dim()).any(|j| x[(k, j)].norm() > tol))
        .collect()
}

/// Classifies a family member by its PT spectrum and structure.
pub fn classify(p: &FamilyParams, tol: f64) -> Result<Classification> {
    let neg = negativity(&pt_block_spectrum(p)?, tol);
    if !neg.is_ppt {
        return Ok(Classification::npt(neg.negativity));
    }
    let rho = assemble(p);
    let simply = is_simply_separable(&rho, p.d_a(), p.d_b(), tol)?;
    let reason = match x_pattern(p.x(), tol) {
        XPattern::Null => Some(Reason::XNullForced),
        XPattern::Diagonal => Some(Reason::SimplySeparable),
        XPattern::Antidiag2x2 if simply => Some(Reason::XNullForced),
        XPattern::Lower2x2 if simply => Some(Reason::XDiagonal),
        _ => None,
    };
    let reason = reason
        .or_else(|| {
            let seed: Vec<(usize, usize)> = x_support(p.x(), tol).into_iter().map(|k| (k, k)).collect();
            let pt = partial_transpose(&rho, p.d_a(), p.d_b()).ok()?;
            product_subspace_rule(&pt, p.d_a(), p.d_b(), &seed, tol).map(|_| Reason::ProductSubspaceDimLe6)
        })
        .or_else(|| match_werner(p, tol).map(|_| Reason::Werner));
    Ok(Classification::ppt(reason, neg.negativity))
}

pub fn classify_qubit_qudit(q: &QubitQuditParams, tol: f64) -> Result<Classification> {
    let neg = negativity(&qubit_qudit_block_spectrum(q)?, tol);
    if !neg.is_ppt {
        return Ok(Classification::npt(neg.negativity));
    }
    let d_b = q.d_b();
    let rho = assemble_qubit_qudit(q);
    if q.x01.norm() <= tol && is_simply_separable(&rho, 2, d_b, tol)? {
        return Ok(Classification::ppt(Some(Reason::SimplySeparable), neg.negativity));
    }
    let pt = partial_transpose(&rho, 2, d_b)?;
    let reason =
        product_subspace_rule(&pt, 2, d_b, &[(0, 0), (1, d_b - 1)], tol).map(|_| Reason::ProductSubspaceDimLe6);
    Ok(Classification::ppt(reason, neg.negativity))
}

/// Classification of an arbitrary dense state from its dense PT spectrum.
pub fn classify_dense(rho: &ComplexMatrix, d_a: usize, d_b: usize, tol: f64) -> Result<Classification> {
    let eigs = crate::transpose::dense_pt_spectrum(rho, d_a, d_b)?;
    let neg = negativity_of_eigenvalues(&eigs, tol);
    if !neg.is_ppt {
        return Ok(Classification::npt(neg.negativity));
    }
    let reason = is_simply_separable(rho, d_a, d_b, tol)?.then_some(Reason::SimplySeparable);
    Ok(Classification::ppt(reason, neg.negativity))
}

/// Isotropic states are separable iff PPT; their partial transpose is a Werner state.
pub fn classify_isotropic(rho: &ComplexMatrix, d: usize, tol: f64) -> Result<Classification> {
    let eigs = crate::transpose::dense_pt_spectrum(rho, d, d)?;
    let neg = negativity_of_eigenvalues(&eigs, tol);
    if !neg.is_ppt {
        return Ok(Classification::npt(neg.negativity));
    }
    Ok(Classification::ppt(Some(Reason::Werner), neg.negativity))
}

/// Ordered index groups partitioning `0..dA·dB`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    pub groups: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }
}

/// Invariant subspaces of `ρ^Γ`: span{|kk⟩} first, then per `k` the
/// `M_k` support `{|k,j⟩ : j<k}` and the `N_k` support `{|k,j⟩ : j>k}`.
pub fn subspace_partition(d_a: usize, d_b: usize) -> BlockPartition {
    let mut groups = vec![(0..d_a).map(|k| k * d_b + k).collect::<Vec<_>>()];
    for k in 0..d_a {
        groups.push((0..k).map(|j| k * d_b + j).collect());
        groups.push((k + 1..d_b).map(|j| k * d_b + j).collect());
    }
    groups.retain(|g| !g.is_empty());
    BlockPartition { groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{sample_qubit_qudit, sample_random};
    use crate::linalg::{c64, DEFAULT_TOL};
    use crate::named::embed_werner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn herm(rows: Vec<Vec<crate::linalg::C64>>) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_rows(rows).unwrap()).unwrap()
    }

    fn two_qubit(x00: f64, x11: f64, x01: f64, a: f64, b: f64) -> FamilyParams {
        FamilyParams::new(
            2,
            2,
            HermitianMatrix::from_real_rows(&[&[x00, x01], &[x01, x11]]).unwrap(),
            vec![HermitianMatrix::zeros(0), HermitianMatrix::from_diagonal(&[a])],
            vec![HermitianMatrix::from_diagonal(&[b]), HermitianMatrix::zeros(0)],
        )
        .unwrap()
    }

    fn random_block_diagonal(d_a: usize, d_b: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut rho = ComplexMatrix::zeros(d_a * d_b);
        for i in 0..d_a {
            let mut g = ComplexMatrix::zeros(d_b);
            for r in 0..d_b {
                for c in 0..d_b {
                    g[(r, c)] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            let block = g.adjoint().matmul(&g).unwrap().hermitian_part();
            for r in 0..d_b {
                for c in 0..d_b {
                    rho[(i * d_b + r, i * d_b + c)] = block[(r, c)];
                }
            }
        }
        let t = rho.trace().re;
        rho.scale(1.0 / t)
    }

    #[test]
    fn simply_separable_examples() {
        let a = ComplexMatrix::from_diagonal(&[0.3, 0.7]);
        let b = ComplexMatrix::from_rows(vec![
            vec![c64(0.5, 0.0), c64(0.1, 0.2)],
            vec![c64(0.1, -0.2), c64(0.5, 0.0)],
        ])
        .unwrap();
        assert!(is_simply_separable(&tensor_product(&a, &b), 2, 2, DEFAULT_TOL).unwrap());
        let entangled = assemble(&two_qubit(0.125, 0.125, 0.25, 0.375, 0.375));
        assert!(!is_simply_separable(&entangled, 2, 2, DEFAULT_TOL).unwrap());
        let sample = assemble(&sample_random(3, 4, 8, 0.0).unwrap());
        assert!(is_simply_separable(&sample, 3, 4, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn decomposition_of_maximally_mixed() {
        let (d_a, d_b) = (3, 4);
        let rho = ComplexMatrix::identity(12).scale(1.0 / 12.0);
        let dec = decompose_simply_separable(&rho, d_a, d_b, DEFAULT_TOL).unwrap();
        assert_eq!(dec.terms.len(), 3);
        for t in &dec.terms {
            assert!((t.weight - 1.0 / 3.0).abs() < 1e-15);
            assert!(t.bob.max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn decomposition_of_diagonal_blocks() {
        let rho = ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        let dec = decompose_simply_separable(&rho, 2, 2, DEFAULT_TOL).unwrap();
        assert_eq!(dec.terms.len(), 2);
        assert_eq!(dec.terms[0].weight, 0.5);
        assert_eq!(dec.terms[1].weight, 0.5);
        assert_eq!(dec.reconstruct().unwrap(), rho);
    }

    #[test]
    fn decomposition_drops_empty_blocks() {
        let rho = ComplexMatrix::from_diagonal(&[0.4, 0.6, 0.0, 0.0]);
        let dec = decompose_simply_separable(&rho, 2, 2, DEFAULT_TOL).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(dec.terms[0].alice_index, 0);
    }

    #[test]
    fn decomposition_rejects_entangled_input() {
        let rho = assemble(&two_qubit(0.125, 0.125, 0.25, 0.375, 0.375));
        assert!(matches!(
            decompose_simply_separable(&rho, 2, 2, DEFAULT_TOL),
            Err(PptError::NotSimplySeparable { .. })
        ));
    }

    #[test]
    fn random_block_diagonal_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let d_a = rng.random_range(2..5);
            let d_b = rng.random_range(d_a..7);
            let rho = random_block_diagonal(d_a, d_b, &mut rng);
            let dec = decompose_simply_separable(&rho, d_a, d_b, DEFAULT_TOL).unwrap();
            assert!((dec.total_weight() - 1.0).abs() <= 1e-12);
            assert!(dec.reconstruct().unwrap().max_abs_diff(&rho).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(x_pattern(&HermitianMatrix::zeros(3), DEFAULT_TOL), XPattern::Null);
        assert_eq!(
            x_pattern(&HermitianMatrix::from_diagonal(&[0.1, 0.2]), DEFAULT_TOL),
            XPattern::Diagonal
        );
        let z = c64(0.0, 0.0);
        let anti = herm(vec![
            vec![z, c64(0.2, 0.0), z, z],
            vec![c64(0.2, 0.0), z, z, z],
            vec![z, z, z, c64(0.0, 0.1)],
            vec![z, z, c64(0.0, -0.1), z],
        ]);
        assert_eq!(x_pattern(&anti, DEFAULT_TOL), XPattern::Antidiag2x2);
        let lower = HermitianMatrix::from_real_rows(&[&[0.0, 0.1], &[0.1, 0.3]]).unwrap();
        assert_eq!(x_pattern(&lower, DEFAULT_TOL), XPattern::Lower2x2);
        let general = HermitianMatrix::from_real_rows(&[&[0.2, 0.1], &[0.1, 0.3]]).unwrap();
        assert_eq!(x_pattern(&general, DEFAULT_TOL), XPattern::General);
        let odd = HermitianMatrix::from_real_rows(&[&[0.0, 0.1, 0.0], &[0.1, 0.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(x_pattern(&odd, DEFAULT_TOL), XPattern::General);
    }

    #[test]
    fn two_qubit_ppt_is_product_subspace() {
        // x00·x11 = 0.04 ≥ |x01|² = 0.01.
        let c = classify(&two_qubit(0.2, 0.2, 0.1, 0.3, 0.3), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::PptSeparable);
        assert_eq!(c.reason, Reason::ProductSubspaceDimLe6);
        let c = classify(&two_qubit(0.125, 0.125, 0.25, 0.375, 0.375), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::NptEntangled);
        assert!((c.negativity - 0.125).abs() < 1e-14);
    }

    fn antidiag_state(xs: [crate::linalg::C64; 2]) -> FamilyParams {
        // dA = dB = 4 with X = [[0,x0],[x0*,0]] ⊕ [[0,x1],[x1*,0]] and identity-like blocks.
        let z = c64(0.0, 0.0);
        let x = herm(vec![
            vec![z, xs[0], z, z],
            vec![xs[0].conj(), z, z, z],
            vec![z, z, z, xs[1]],
            vec![z, z, xs[1].conj(), z],
        ]);
        let w = 1.0 / 12.0;
        FamilyParams::new(
            4,
            4,
            x,
            (0..4).map(|k| HermitianMatrix::identity(k).scale(w)).collect(),
            (0..4).map(|k| HermitianMatrix::identity(3 - k).scale(w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn antidiagonal_x_is_entangled_unless_null() {
        let c = classify(&antidiag_state([c64(0.02, 0.0), c64(0.0, 0.01)]), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::NptEntangled);
        assert!((c.negativity - 0.03).abs() < 1e-14);

        let c = classify(&antidiag_state([c64(0.0, 0.0), c64(0.0, 0.0)]), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::PptSeparable);
        assert_eq!(c.reason, Reason::XNullForced);
    }

    #[test]
    fn lower_pattern_with_tiny_coupling_is_undecided() {
        // [[0, x],[x*, y]] with |x| = 1e-6: the negative eigenvalue ≈ −|x|²/y sits
        // below tolerance but the state is not simply separable.
        let x = HermitianMatrix::from_real_rows(&[&[0.0, 1e-6], &[1e-6, 0.2]]).unwrap();
        let p = FamilyParams::new(
            2,
            2,
            x,
            vec![HermitianMatrix::zeros(0), HermitianMatrix::from_diagonal(&[0.4])],
            vec![HermitianMatrix::from_diagonal(&[0.4]), HermitianMatrix::zeros(0)],
        )
        .unwrap();
        let c = classify(&p, DEFAULT_TOL).unwrap();
        assert!(c.is_ppt);
        assert_ne!(c.reason, Reason::XDiagonal);
    }

    #[test]
    fn werner_embeddings_classify() {
        let ppt = classify(&embed_werner(3, -0.05).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(ppt.verdict, Verdict::PptSeparable);
        assert_eq!(ppt.reason, Reason::Werner);
        let npt = classify(&embed_werner(3, -0.4).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(npt.verdict, Verdict::NptEntangled);
    }

    #[test]
    fn qubit_qudit_rules() {
        for d_b in [2, 3] {
            for seed in 0..20 {
                let q = sample_qubit_qudit(d_b, seed, 1.0).unwrap();
                let c = classify_qubit_qudit(&q, DEFAULT_TOL).unwrap();
                if c.is_ppt && q.x01.norm() > DEFAULT_TOL {
                    assert_eq!(c.reason, Reason::ProductSubspaceDimLe6);
                }
            }
        }
        let q = sample_qubit_qudit(4, 3, 0.0).unwrap();
        let c = classify_qubit_qudit(&q, DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::PptSeparable);
        assert!(is_simply_separable(&assemble_qubit_qudit(&q), 2, 4, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn qubit_quatrit_product_subspace_shape() {
        // A = [[a, c, 0],[c*, b, 0],[0, 0, y]], B = [[z, 0, 0],[0, d, f],[0, f*, e]]:
        // the X block together with y, z occupies span{|0⟩,|1⟩} ⊗ span{|0⟩,|3⟩}.
        let z0 = c64(0.0, 0.0);
        let a = herm(vec![
            vec![c64(0.12, 0.0), c64(0.02, 0.01), z0],
            vec![c64(0.02, -0.01), c64(0.1, 0.0), z0],
            vec![z0, z0, c64(0.11, 0.0)],
        ]);
        let b = herm(vec![
            vec![c64(0.13, 0.0), z0, z0],
            vec![z0, c64(0.1, 0.0), c64(-0.01, 0.03)],
            vec![z0, c64(-0.01, -0.03), c64(0.14, 0.0)],
        ]);
        let q = QubitQuditParams::new(4, 0.1, 0.1, c64(0.05, 0.0), a.clone(), b.clone()).unwrap();
        let c = classify_qubit_qudit(&q, DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::PptSeparable);
        assert_eq!(c.reason, Reason::ProductSubspaceDimLe6);

        // Coupling |03⟩ to |01⟩ inside A breaks the product-subspace shape.
        let mut a2 = a.matrix().clone();
        a2[(0, 2)] = c64(0.01, 0.0);
        a2[(2, 0)] = c64(0.01, 0.0);
        let q2 = QubitQuditParams::new(4, 0.1, 0.1, c64(0.05, 0.0), HermitianMatrix::new(a2).unwrap(), b).unwrap();
        let c2 = classify_qubit_qudit(&q2, DEFAULT_TOL).unwrap();
        assert_eq!(c2.verdict, Verdict::PptUndecided);
    }

    #[test]
    fn labels_serialize_verbatim() {
        let json = |v: serde_json::Value| v.as_str().unwrap().to_owned();
        assert_eq!(
            json(serde_json::to_value(Reason::ProductSubspaceDimLe6).unwrap()),
            "PRODUCT_SUBSPACE_DIM_LE_6"
        );
        assert_eq!(
            json(serde_json::to_value(Reason::XNullForced).unwrap()),
            "X_NULL_FORCED"
        );
        assert_eq!(
            json(serde_json::to_value(Verdict::PptUndecided).unwrap()),
            "PPT_UNDECIDED"
        );
        assert_eq!(
            json(serde_json::to_value(XPattern::Antidiag2x2).unwrap()),
            "ANTIDIAG_2x2"
        );
        assert_eq!(json(serde_json::to_value(XPattern::Lower2x2).unwrap()), "LOWER_2x2");
    }

    #[test]
    fn partition_examples() {
        let p = subspace_partition(4, 4);
        let idx = |a: usize, b: usize| a * 4 + b;
        assert_eq!(
            p.groups,
            vec![
                vec![idx(0, 0), idx(1, 1), idx(2, 2), idx(3, 3)],
                vec![idx(0, 1), idx(0, 2), idx(0, 3)],
                vec![idx(1, 0)],
                vec![idx(1, 2), idx(1, 3)],
                vec![idx(2, 0), idx(2, 1)],
                vec![idx(2, 3)],
                vec![idx(3, 0), idx(3, 1), idx(3, 2)],
            ]
        );
        assert_eq!(subspace_partition(2, 2).groups, vec![vec![0, 3], vec![1], vec![2]]);
        for (d_a, d_b) in [(2, 5), (3, 3), (3, 6), (4, 6)] {
            let mut all: Vec<usize> = subspace_partition(d_a, d_b).groups.concat();
            all.sort_unstable();
            assert_eq!(all, (0..d_a * d_b).collect::<Vec<_>>());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn pt_has_no_coupling_between_groups(d_a in 2usize..5, extra in 0usize..3, seed in any::<u64>(), bias in 0.0f64..=1.0) {
                let d_b = d_a + extra;
                let p = sample_random(d_a, d_b, seed, bias).unwrap();
                let pt = partial_transpose(&assemble(&p), d_a, d_b).unwrap();
                let part = subspace_partition(d_a, d_b);
                let mut group_of = vec![0; d_a * d_b];
                for (g, idx) in part.groups.iter().enumerate() {
                    for &i in idx {
                        group_of[i] = g;
                    }
                }
                for r in 0..d_a * d_b {
                    for c in 0..d_a * d_b {
                        if group_of[r] != group_of[c] {
                            prop_assert_eq!(pt[(r, c)], c64(0.0, 0.0));
                        }
                    }
                }
            }

            #[test]
            fn classifier_is_sound(d_a in 2usize..5, extra in 0usize..3, seed in any::<u64>(), bias in 0.0f64..=1.0) {
                let d_b = d_a + extra;
                let p = sample_random(d_a, d_b, seed, bias).unwrap();
                let c = classify(&p, DEFAULT_TOL).unwrap();
                prop_assert!(!(c.verdict == Verdict::PptSeparable && c.reason == Reason::None));
                prop_assert_eq!(c.verdict == Verdict::NptEntangled, c.negativity > DEFAULT_TOL);
                if matches!(c.reason, Reason::XNullForced | Reason::XDiagonal) {
                    prop_assert!(is_simply_separable(&assemble(&p), d_a, d_b, DEFAULT_TOL).unwrap());
                }
            }
        }
    }
}
