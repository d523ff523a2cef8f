//! Basis permutations that expose the direct-sum structure of `ρ^Γ` as
//! literal diagonal blocks.

use serde::Serialize;

use crate::error::{PptError, Result};
use crate::family::{FamilyParams, QubitQuditParams};
use crate::linalg::ComplexMatrix;
use crate::separability::{subspace_partition, BlockPartition};

/// A reordering of the product basis: `map[new] = old`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BasisPermutation {
    map: Vec<usize>,
}

impl BasisPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() {
                return Err(PptError::IndexOutOfRange {
                    index: i,
                    dim: map.len(),
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(PptError::InvalidParameter(format!(
                    "index {i} appears twice in permutation"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (new, &old) in self.map.iter().enumerate() {
            inv[old] = new;
        }
        Self { map: inv }
    }
}

impl From<&BlockPartition> for BasisPermutation {
    fn from(part: &BlockPartition) -> Self {
        Self {
            map: part.groups.concat(),
        }
    }
}

pub fn subspace_permutation_for_dims(d_a: usize, d_b: usize) -> BasisPermutation {
    BasisPermutation::from(&subspace_partition(d_a, d_b))
}

pub fn subspace_permutation(p: &FamilyParams) -> BasisPermutation {
    subspace_permutation_for_dims(p.d_a(), p.d_b())
}

/// Groups for the qubit-qudit family: `{|00⟩, |1,dB−1⟩}`, then the `A`
/// support `|0⟩⊗{1..dB−1}`, then the `B` support `|1⟩⊗{0..dB−2}`.
pub fn qubit_qudit_partition(d_b: usize) -> BlockPartition {
    BlockPartition {
        groups: vec![vec![0, 2 * d_b - 1], (1..d_b).collect(), (d_b..2 * d_b - 1).collect()],
    }
}

pub fn qubit_qudit_permutation(q: &QubitQuditParams) -> BasisPermutation {
    BasisPermutation::from(&qubit_qudit_partition(q.d_b()))
}

pub fn block_sizes(part: &BlockPartition) -> Vec<usize> {
    part.sizes()
}

/// `result[r][c] = ρ[perm[r]][perm[c]]`.
pub fn apply_permutation(rho: &ComplexMatrix, perm: &BasisPermutation) -> Result<ComplexMatrix> {
    if rho.dim() != perm.len() {
        return Err(PptError::DimensionMismatch(format!(
            "matrix is {0}x{0}, permutation has {1} entries",
            rho.dim(),
            perm.len()
        )));
    }
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (r, &pr) in perm.map.iter().enumerate() {
        for (c, &pc) in perm.map.iter().enumerate() {
            out[(r, c)] = rho[(pr, pc)];
        }
    }
    Ok(out)
}

fn check_sizes(m: &ComplexMatrix, sizes: &[usize]) -> Result<()> {
    let total: usize = sizes.iter().sum();
    if total != m.dim() {
        return Err(PptError::DimensionMismatch(format!(
            "block sizes sum to {total}, matrix is {0}x{0}",
            m.dim()
        )));
    }
    Ok(())
}

fn block_labels(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockDiagonalCheck {
    pub block_diagonal: bool,
    pub max_off_block: f64,
}

pub fn verify_block_diagonal(m: &ComplexMatrix, sizes: &[usize], tol: f64) -> Result<BlockDiagonalCheck> {
    check_sizes(m, sizes)?;
    let label = block_labels(sizes);
    let mut worst = 0.0f64;
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            if label[r] != label[c] {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    Ok(BlockDiagonalCheck {
        block_diagonal: worst <= tol,
        max_off_block: worst,
    })
}

/// The contiguous diagonal blocks of `m`.
pub fn extract_blocks(m: &ComplexMatrix, sizes: &[usize]) -> Result<Vec<ComplexMatrix>> {
    check_sizes(m, sizes)?;
    let mut start = 0;
    let mut blocks = Vec::with_capacity(sizes.len());
    for &s in sizes {
        let idx: Vec<usize> = (start..start + s).collect();
        blocks.push(crate::linalg::submatrix(m, &idx)?);
        start += s;
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{assemble, assemble_qubit_qudit, sample_qubit_qudit, sample_random};
    use crate::fixtures::{d4_example, D4_BLOCK_SIZES, D4_REORDERED_BASIS};
    use crate::linalg::{c64, hermitian_eigenvalues, max_sorted_deviation, HermitianMatrix};
    use crate::transpose::partial_transpose;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reordered_pt(p: &FamilyParams) -> ComplexMatrix {
        let pt = partial_transpose(&assemble(p), p.d_a(), p.d_b()).unwrap();
        apply_permutation(&pt, &subspace_permutation(p)).unwrap()
    }

    #[test]
    fn d4_ordering() {
        let p = d4_example();
        assert_eq!(subspace_permutation(&p).as_slice(), &D4_REORDERED_BASIS);
        assert_eq!(block_sizes(&subspace_partition(4, 4)), D4_BLOCK_SIZES.to_vec());
    }

    #[test]
    fn d4_blocks_are_exact() {
        let p = d4_example();
        let m = reordered_pt(&p);
        let check = verify_block_diagonal(&m, &D4_BLOCK_SIZES, 0.0).unwrap();
        assert!(check.block_diagonal);
        assert_eq!(check.max_off_block, 0.0);
        let blocks = extract_blocks(&m, &D4_BLOCK_SIZES).unwrap();
        let expected = [
            p.x().matrix().clone(),
            p.n()[0].transpose().into_matrix(),
            p.m()[1].transpose().into_matrix(),
            p.n()[1].transpose().into_matrix(),
            p.m()[2].transpose().into_matrix(),
            p.n()[2].transpose().into_matrix(),
            p.m()[3].transpose().into_matrix(),
        ];
        for (got, want) in blocks.iter().zip(expected.iter()) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn d4_reordered_state_layout() {
        // In the reordered basis the state keeps X on the first four indices
        // with its off-diagonals moved out of the X block.
        let p = d4_example();
        let rho = apply_permutation(&assemble(&p), &subspace_permutation(&p)).unwrap();
        for k in 0..4 {
            assert_eq!(rho[(k, k)], p.x()[(k, k)]);
        }
        // x01 links |01⟩ (position 4) and |10⟩ (position 7).
        assert_eq!(rho[(4, 7)], p.x()[(0, 1)]);
        assert_eq!(rho[(0, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn two_qubit_permutation() {
        assert_eq!(subspace_permutation_for_dims(2, 2).as_slice(), &[0, 3, 1, 2]);
    }

    #[test]
    fn two_by_three_blocks() {
        // X, N_0, M_1, N_1 with the empty M_0 skipped.
        assert_eq!(block_sizes(&subspace_partition(2, 3)), vec![2, 2, 1, 1]);
        assert_eq!(subspace_permutation_for_dims(2, 3).as_slice(), &[0, 4, 1, 2, 3, 5]);
    }

    #[test]
    fn identity_permutation_is_noop() {
        let rho = assemble(&d4_example());
        assert_eq!(apply_permutation(&rho, &BasisPermutation::identity(16)).unwrap(), rho);
    }

    #[test]
    fn permutation_validation() {
        assert!(BasisPermutation::new(vec![1, 0, 2]).is_ok());
        assert!(BasisPermutation::new(vec![1, 1, 2]).is_err());
        assert!(matches!(
            BasisPermutation::new(vec![0, 3, 1]),
            Err(PptError::IndexOutOfRange { index: 3, dim: 3 })
        ));
        let p = BasisPermutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse().as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn size_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(verify_block_diagonal(&m, &[2, 1], 0.0).is_err());
        assert!(apply_permutation(&m, &BasisPermutation::identity(3)).is_err());
        assert!(verify_block_diagonal(&m, &[4], 0.0).unwrap().block_diagonal);
    }

    #[test]
    fn dense_random_is_not_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = ComplexMatrix::zeros(6);
        for r in 0..6 {
            for c in 0..6 {
                g[(r, c)] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let h = g.hermitian_part();
        let check = verify_block_diagonal(&h, &[2, 2, 1, 1], 1e-10).unwrap();
        assert!(!check.block_diagonal);
        assert!(check.max_off_block > 0.0);
    }

    #[test]
    fn qubit_qudit_blocks() {
        for d_b in 2..6 {
            let q = sample_qubit_qudit(d_b, 5, 0.8).unwrap();
            let pt = partial_transpose(&assemble_qubit_qudit(&q), 2, d_b).unwrap();
            let part = qubit_qudit_partition(d_b);
            let m = apply_permutation(&pt, &qubit_qudit_permutation(&q)).unwrap();
            let check = verify_block_diagonal(&m, &part.sizes(), 0.0).unwrap();
            assert_eq!(check.max_off_block, 0.0);
            let blocks = extract_blocks(&m, &part.sizes()).unwrap();
            assert_eq!(blocks[0], q.x_matrix().into_matrix());
            assert_eq!(blocks[1], q.a().transpose().into_matrix());
            assert_eq!(blocks[2], q.b().transpose().into_matrix());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn reordered_pt_is_block_diagonal(d_a in 2usize..5, extra in 0usize..3, seed in any::<u64>(), bias in 0.0f64..=1.0) {
                let d_b = d_a + extra;
                let p = sample_random(d_a, d_b, seed, bias).unwrap();
                let m = reordered_pt(&p);
                let part = subspace_partition(d_a, d_b);
                prop_assert_eq!(part.sizes()[0], d_a);
                let check = verify_block_diagonal(&m, &part.sizes(), 0.0).unwrap();
                prop_assert_eq!(check.max_off_block, 0.0);

                let blocks = extract_blocks(&m, &part.sizes()).unwrap();
                let mut expected = vec![p.x().matrix().clone()];
                for k in 0..d_a {
                    for b in [&p.m()[k], &p.n()[k]] {
                        if b.dim() > 0 {
                            expected.push(b.transpose().into_matrix());
                        }
                    }
                }
                prop_assert_eq!(blocks, expected);
            }

            #[test]
            fn permutation_preserves_trace_hermiticity_and_spectrum(d_a in 2usize..4, extra in 0usize..3, seed in any::<u64>()) {
                let d_b = d_a + extra;
                let p = sample_random(d_a, d_b, seed, 1.0).unwrap();
                let rho = assemble(&p);
                let out = apply_permutation(&rho, &subspace_permutation(&p)).unwrap();
                // Same diagonal entries, so the trace agrees up to summation order.
                let mut d_in: Vec<f64> = (0..rho.dim()).map(|i| rho[(i, i)].re).collect();
                let mut d_out: Vec<f64> = (0..out.dim()).map(|i| out[(i, i)].re).collect();
                d_in.sort_by(f64::total_cmp);
                d_out.sort_by(f64::total_cmp);
                prop_assert_eq!(d_in, d_out);
                prop_assert!((out.trace() - rho.trace()).norm() <= 1e-15);
                prop_assert_eq!(out.hermitian_asymmetry(), 0.0);
                let before = hermitian_eigenvalues(&HermitianMatrix::new(rho).unwrap()).unwrap();
                let after = hermitian_eigenvalues(&HermitianMatrix::new(out).unwrap()).unwrap();
                prop_assert!(max_sorted_deviation(&before, &after).unwrap() <= 1e-12);
            }
        }
    }
}
