//! The block-structured state family and its qubit-qudit variant.
//!
//! In the standard computational basis `|a, b⟩ ↦ a·dB + b`, a family member
//! has diagonal Alice blocks `A_kk = M_k ⊕ x_kk ⊕ N_k` (Bob indices `0..k`,
//! `k`, `k+1..dB`) and off-diagonal Alice blocks carrying the single entry
//! `x_ij` at Bob position `(j, i)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{PptError, Result};
use crate::linalg::{c64, hermitian_eigenvalues, is_positive_definite, ComplexMatrix, HermitianMatrix, C64};

/// Trace-normalization tolerance.
pub const TRACE_TOL: f64 = 1e-10;

/// Bisection steps used by [`sample_random`] when shrinking the X off-diagonals.
const SHRINK_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    d_a: usize,
    d_b: usize,
    x: HermitianMatrix,
    m: Vec<HermitianMatrix>,
    n: Vec<HermitianMatrix>,
}

impl FamilyParams {
    /// Checks `2 ≤ dA ≤ dB`, `X` of size dA, `M[k]` of size k, `N[k]` of size dB−1−k.
    pub fn new(
        d_a: usize,
        d_b: usize,
        x: HermitianMatrix,
        m: Vec<HermitianMatrix>,
        n: Vec<HermitianMatrix>,
    ) -> Result<Self> {
        if d_a < 2 || d_b < d_a {
            return Err(PptError::InvalidParameter(format!(
                "family requires 2 <= dA <= dB, got dA={d_a}, dB={d_b}"
            )));
        }
        if x.dim() != d_a {
            return Err(PptError::DimensionMismatch(format!(
                "X must be {d_a}x{d_a}, got {0}x{0}",
                x.dim()
            )));
        }
        if m.len() != d_a || n.len() != d_a {
            return Err(PptError::DimensionMismatch(format!(
                "expected {d_a} M and N blocks, got {} and {}",
                m.len(),
                n.len()
            )));
        }
        for k in 0..d_a {
            if m[k].dim() != k {
                return Err(PptError::DimensionMismatch(format!(
                    "M[{k}] must be {k}x{k}, got {0}x{0}",
                    m[k].dim()
                )));
            }
            let nk = d_b - 1 - k;
            if n[k].dim() != nk {
                return Err(PptError::DimensionMismatch(format!(
                    "N[{k}] must be {nk}x{nk}, got {0}x{0}",
                    n[k].dim()
                )));
            }
        }
        Ok(Self { d_a, d_b, x, m, n })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn x(&self) -> &HermitianMatrix {
        &self.x
    }

    pub fn m(&self) -> &[HermitianMatrix] {
        &self.m
    }

    pub fn n(&self) -> &[HermitianMatrix] {
        &self.n
    }

    /// Sum of the traces of all blocks and the X diagonal.
    pub fn block_trace(&self) -> f64 {
        self.x.trace()
            + self.m.iter().map(HermitianMatrix::trace).sum::<f64>()
            + self.n.iter().map(HermitianMatrix::trace).sum::<f64>()
    }

    /// Reads family parameters back out of a dense matrix, provided every entry
    /// outside the family pattern is at most `tol` in modulus.
    pub fn from_dense(rho: &ComplexMatrix, d_a: usize, d_b: usize, tol: f64) -> Result<Self> {
        if rho.dim() != d_a * d_b {
            return Err(PptError::DimensionMismatch(format!(
                "matrix is {0}x{0}, expected {1}x{1} for dA={d_a}, dB={d_b}",
                rho.dim(),
                d_a * d_b
            )));
        }
        let worst = pattern_violation(rho, d_a, d_b);
        if worst > tol {
            return Err(PptError::NotFamilyStructured(format!(
                "entry of modulus {worst:e} lies outside the family pattern"
            )));
        }
        let herm = HermitianMatrix::new(rho.clone())?;
        let mut x = ComplexMatrix::zeros(d_a);
        for i in 0..d_a {
            for j in 0..d_a {
                // x_ij sits at row |i j⟩, column |j i⟩.
                x[(i, j)] = herm[(i * d_b + j, j * d_b + i)];
            }
        }
        let mut m = Vec::with_capacity(d_a);
        let mut n = Vec::with_capacity(d_a);
        for k in 0..d_a {
            let m_idx: Vec<usize> = (0..k).map(|j| k * d_b + j).collect();
            let n_idx: Vec<usize> = (k + 1..d_b).map(|j| k * d_b + j).collect();
            m.push(HermitianMatrix::new(crate::linalg::submatrix(&herm, &m_idx)?)?);
            n.push(HermitianMatrix::new(crate::linalg::submatrix(&herm, &n_idx)?)?);
        }
        Self::new(d_a, d_b, HermitianMatrix::new(x)?, m, n)
    }
}

/// True when `(row, col)` of a `dA·dB` matrix may be nonzero for a family member.
pub fn in_family_pattern(row: usize, col: usize, d_b: usize) -> bool {
    let (i, r) = (row / d_b, row % d_b);
    let (j, c) = (col / d_b, col % d_b);
    if i == j {
        // M_i, x_ii, N_i blocks along the diagonal block.
        (r < i && c < i) || (r == i && c == i) || (r > i && c > i)
    } else {
        r == j && c == i
    }
}

/// Largest modulus of an entry outside the family pattern.
pub fn pattern_violation(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> f64 {
    let mut worst = 0.0f64;
    for row in 0..d_a * d_b {
        for col in 0..d_a * d_b {
            if !in_family_pattern(row, col, d_b) {
                worst = worst.max(rho[(row, col)].norm());
            }
        }
    }
    worst
}

/// Dense `dA·dB` matrix of a family member.
pub fn assemble(p: &FamilyParams) -> ComplexMatrix {
    let (d_a, d_b) = (p.d_a, p.d_b);
    let mut rho = ComplexMatrix::zeros(d_a * d_b);
    for k in 0..d_a {
        let base = k * d_b;
        for r in 0..k {
            for c in 0..k {
                rho[(base + r, base + c)] = p.m[k][(r, c)];
            }
        }
        rho[(base + k, base + k)] = p.x[(k, k)];
        for r in 0..d_b - 1 - k {
            for c in 0..d_b - 1 - k {
                rho[(base + k + 1 + r, base + k + 1 + c)] = p.n[k][(r, c)];
            }
        }
    }
    for i in 0..d_a {
        for j in 0..d_a {
            if i != j {
                rho[(i * d_b + j, j * d_b + i)] = p.x[(i, j)];
            }
        }
    }
    rho
}

/// Outcome of checking hermiticity, unit trace and positive semidefiniteness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermitian: bool,
    pub trace: f64,
    pub trace_ok: bool,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub overall: bool,
    /// Whether the matrix respects the family sparsity pattern; `None` when not checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern_ok: Option<bool>,
}

/// Validates a dense density matrix. A matrix within the Hermitian repair
/// threshold counts as Hermitian; the spectrum is that of its Hermitian part.
pub fn validate_matrix(rho: &ComplexMatrix, tol: f64) -> Result<ValidationReport> {
    let hermitian = HermitianMatrix::new(rho.clone()).is_ok();
    let h = HermitianMatrix::new(rho.hermitian_part()).expect("Hermitian part is Hermitian");
    let trace = rho.trace().re;
    let trace_ok = (trace - 1.0).abs() <= TRACE_TOL;
    let min_eigenvalue = hermitian_eigenvalues(&h)?.first().copied().unwrap_or(0.0);
    let psd = min_eigenvalue >= -tol * trace.max(1.0);
    Ok(ValidationReport {
        hermitian,
        trace,
        trace_ok,
        min_eigenvalue,
        psd,
        overall: hermitian && trace_ok && psd,
        pattern_ok: None,
    })
}

/// Validates a dense matrix that claims to be a `dA ⊗ dB` family member.
pub fn validate_family_matrix(rho: &ComplexMatrix, d_a: usize, d_b: usize, tol: f64) -> Result<ValidationReport> {
    if rho.dim() != d_a * d_b {
        return Err(PptError::DimensionMismatch(format!(
            "matrix is {0}x{0}, expected {1}",
            rho.dim(),
            d_a * d_b
        )));
    }
    let mut report = validate_matrix(rho, tol)?;
    report.pattern_ok = Some(pattern_violation(rho, d_a, d_b) == 0.0);
    Ok(report)
}

pub fn validate(p: &FamilyParams, tol: f64) -> Result<ValidationReport> {
    validate_family_matrix(&assemble(p), p.d_a, p.d_b, tol)
}

/// Qubit-qudit family: `x00|00⟩⟨00| + x11|1,dB−1⟩⟨1,dB−1| + x01|0,dB−1⟩⟨10| + h.c.`
/// plus `A` on `|0⟩⊗{|1⟩..|dB−1⟩}` and `B` on `|1⟩⊗{|0⟩..|dB−2⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitQuditParams {
    d_b: usize,
    pub x00: f64,
    pub x11: f64,
    pub x01: C64,
    a: HermitianMatrix,
    b: HermitianMatrix,
}

impl QubitQuditParams {
    pub fn new(d_b: usize, x00: f64, x11: f64, x01: C64, a: HermitianMatrix, b: HermitianMatrix) -> Result<Self> {
        if d_b < 2 {
            return Err(PptError::InvalidParameter(format!(
                "qubit-qudit requires dB >= 2, got {d_b}"
            )));
        }
        if a.dim() != d_b - 1 || b.dim() != d_b - 1 {
            return Err(PptError::DimensionMismatch(format!(
                "A and B must be {0}x{0}, got {1} and {2}",
                d_b - 1,
                a.dim(),
                b.dim()
            )));
        }
        if ![x00, x11, x01.re, x01.im].iter().all(|v| v.is_finite()) {
            return Err(PptError::InvalidParameter("non-finite X entry".into()));
        }
        Ok(Self {
            d_b,
            x00,
            x11,
            x01,
            a,
            b,
        })
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    /// The 2×2 matrix acting on span{|00⟩, |1,dB−1⟩} after partial transposition.
    pub fn x_matrix(&self) -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_rows(vec![
                vec![c64(self.x00, 0.0), self.x01],
                vec![self.x01.conj(), c64(self.x11, 0.0)],
            ])
            .expect("finite 2x2"),
        )
        .expect("Hermitian by construction")
    }

    /// For `dB = 2` the qubit-qudit layout coincides with the general family.
    pub fn to_family(&self) -> Option<FamilyParams> {
        if self.d_b != 2 {
            return None;
        }
        FamilyParams::new(
            2,
            2,
            self.x_matrix(),
            vec![HermitianMatrix::zeros(0), self.b.clone()],
            vec![self.a.clone(), HermitianMatrix::zeros(0)],
        )
        .ok()
    }
}

pub fn assemble_qubit_qudit(q: &QubitQuditParams) -> ComplexMatrix {
    let d_b = q.d_b;
    let mut rho = ComplexMatrix::zeros(2 * d_b);
    for i in 0..d_b - 1 {
        for j in 0..d_b - 1 {
            rho[(1 + i, 1 + j)] = q.a[(i, j)];
            rho[(d_b + i, d_b + j)] = q.b[(i, j)];
        }
    }
    rho[(0, 0)] += c64(q.x00, 0.0);
    rho[(2 * d_b - 1, 2 * d_b - 1)] += c64(q.x11, 0.0);
    rho[(d_b - 1, d_b)] += q.x01;
    rho[(d_b, d_b - 1)] += q.x01.conj();
    rho
}

pub fn validate_qubit_qudit(q: &QubitQuditParams, tol: f64) -> Result<ValidationReport> {
    validate_matrix(&assemble_qubit_qudit(q), tol)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `G†G` for a seeded complex Gaussian `G`.
fn gram_block(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    let g = ComplexMatrix::new(n, data).expect("finite gaussian draws");
    let gram = g.adjoint().matmul(&g).expect("same dimension");
    HermitianMatrix::new(gram.hermitian_part()).expect("symmetrized")
}

fn with_x(p: &FamilyParams, x: HermitianMatrix) -> FamilyParams {
    FamilyParams { x, ..p.clone() }
}

fn scale_off_diagonal(x: &HermitianMatrix, s: f64) -> HermitianMatrix {
    let mut m = x.matrix().clone();
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            if r != c {
                m[(r, c)] *= s;
            }
        }
    }
    HermitianMatrix::new(m).expect("scaling preserves hermiticity")
}

fn normalize(p: FamilyParams) -> FamilyParams {
    let t = p.block_trace();
    FamilyParams {
        x: p.x.scale(1.0 / t),
        m: p.m.iter().map(|b| b.scale(1.0 / t)).collect(),
        n: p.n.iter().map(|b| b.scale(1.0 / t)).collect(),
        ..p
    }
}

/// Seeded random family member.
///
/// Blocks are Gram matrices, `x_kk ≥ 0`, and the X off-diagonals are complex
/// Gaussians times `entanglement_bias`, shrunk by bisection until the assembled
/// matrix is positive definite. With bias 0 the sample is simply separable.
pub fn sample_random(d_a: usize, d_b: usize, seed: u64, entanglement_bias: f64) -> Result<FamilyParams> {
    if d_a < 2 || d_b < d_a {
        return Err(PptError::InvalidParameter(format!(
            "sampling requires 2 <= dA <= dB, got dA={d_a}, dB={d_b}"
        )));
    }
    if !(0.0..=1.0).contains(&entanglement_bias) {
        return Err(PptError::InvalidParameter(format!(
            "entanglement bias must lie in [0, 1], got {entanglement_bias}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m: Vec<HermitianMatrix> = (0..d_a).map(|k| gram_block(k, &mut rng)).collect();
    let n: Vec<HermitianMatrix> = (0..d_a).map(|k| gram_block(d_b - 1 - k, &mut rng)).collect();

    let mut x = ComplexMatrix::zeros(d_a);
    for k in 0..d_a {
        x[(k, k)] = c64(complex_gaussian(&mut rng).norm_sqr(), 0.0);
    }
    for r in 0..d_a {
        for c in r + 1..d_a {
            let z = complex_gaussian(&mut rng) * entanglement_bias;
            x[(r, c)] = z;
            x[(c, r)] = z.conj();
        }
    }
    let x = HermitianMatrix::new(x).expect("Hermitian by construction");
    let base = FamilyParams::new(d_a, d_b, x.clone(), m, n)?;

    let is_pd = |s: f64| {
        let trial = with_x(&base, scale_off_diagonal(&x, s));
        HermitianMatrix::new(assemble(&trial))
            .map(|h| is_positive_definite(&h))
            .unwrap_or(false)
    };

    let scale = if entanglement_bias == 0.0 || is_pd(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..SHRINK_STEPS {
            let mid = 0.5 * (lo + hi);
            if is_pd(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    Ok(normalize(with_x(&base, scale_off_diagonal(&x, scale))))
}

/// Seeded random qubit-qudit member, built the same way as [`sample_random`].
pub fn sample_qubit_qudit(d_b: usize, seed: u64, entanglement_bias: f64) -> Result<QubitQuditParams> {
    if d_b < 2 {
        return Err(PptError::InvalidParameter(format!(
            "qubit-qudit requires dB >= 2, got {d_b}"
        )));
    }
    if !(0.0..=1.0).contains(&entanglement_bias) {
        return Err(PptError::InvalidParameter(format!(
            "entanglement bias must lie in [0, 1], got {entanglement_bias}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gram_block(d_b - 1, &mut rng);
    let b = gram_block(d_b - 1, &mut rng);
    let x00 = complex_gaussian(&mut rng).norm_sqr();
    let x11 = complex_gaussian(&mut rng).norm_sqr();
    let x01 = complex_gaussian(&mut rng) * entanglement_bias;

    let build = |s: f64| QubitQuditParams::new(d_b, x00, x11, x01 * s, a.clone(), b.clone());
    let is_pd = |s: f64| {
        build(s)
            .ok()
            .and_then(|q| HermitianMatrix::new(assemble_qubit_qudit(&q)).ok())
            .map(|h| is_positive_definite(&h))
            .unwrap_or(false)
    };
    let scale = if entanglement_bias == 0.0 || is_pd(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..SHRINK_STEPS {
            let mid = 0.5 * (lo + hi);
            if is_pd(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let q = build(scale)?;
    let t = q.x00 + q.x11 + q.a.trace() + q.b.trace();
    QubitQuditParams::new(
        d_b,
        q.x00 / t,
        q.x11 / t,
        q.x01 / t,
        q.a.scale(1.0 / t),
        q.b.scale(1.0 / t),
    )
}
