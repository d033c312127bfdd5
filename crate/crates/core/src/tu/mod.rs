//! Total unimodularity, surface connection matrices and Betti numbers.

mod surface;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{QMatrix, Rational};
use crate::model::ConnectionMatrix;

pub use surface::{
    generate_surface_matrix, is_surface_connection_matrix, SurfaceProfile, SurfaceProperty, SurfaceRejection,
    SurfaceSpec, SurfaceVerdict,
};

/// Largest `m` accepted by the exhaustive test.
pub const DEFAULT_TU_GUARD: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TuError {
    #[error("exhaustive TU check is limited to m <= {guard} (got m = {m}); use the sampled check")]
    TooLarge { m: usize, guard: usize },
}

/// A square submatrix whose determinant is not in `{0, 1, -1}`.
/// Labels are those of the matrix that was checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuCertificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: Rational,
}

/// Exhaustive test with the default size guard.
pub fn is_totally_unimodular(matrix: &ConnectionMatrix) -> Result<bool, TuError> {
    is_totally_unimodular_with_guard(matrix, DEFAULT_TU_GUARD)
}

pub fn is_totally_unimodular_with_guard(matrix: &ConnectionMatrix, guard: usize) -> Result<bool, TuError> {
    Ok(tu_certificate(matrix, guard)?.is_none())
}

/// Searches every square submatrix for a determinant outside `{0, ±1}`.
///
/// Rows of `J_{k-1}` only meet columns of `J_k`, so after permuting labels
/// the matrix is block diagonal in its blocks `Δ_{J_{k-1} J_k}` and each block
/// can be scanned on its own.
pub fn tu_certificate(matrix: &ConnectionMatrix, guard: usize) -> Result<Option<TuCertificate>, TuError> {
    let m = matrix.m();
    if m > guard {
        return Err(TuError::TooLarge { m, guard });
    }
    let partition = matrix.partition();
    for k in 1..=matrix.b() {
        let rows = partition.subset(k - 1);
        let cols = partition.subset(k);
        if let Some(mut cert) = dense_certificate(&matrix.block(k)) {
            cert.rows = cert.rows.iter().map(|&i| rows[i - 1]).collect();
            cert.cols = cert.cols.iter().map(|&j| cols[j - 1]).collect();
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Exhaustive test on an arbitrary (small) dense matrix.
pub fn is_tu_dense(a: &QMatrix) -> bool {
    dense_certificate(a).is_none()
}

/// First violating submatrix of `a` by increasing size, with 1-based local labels.
pub fn dense_certificate(a: &QMatrix) -> Option<TuCertificate> {
    if let Some((i, j, v)) = a.nonzeros().find(|(_, _, v)| !crate::matrix::is_unit(v)) {
        return Some(TuCertificate { rows: vec![i], cols: vec![j], det: v.clone() });
    }
    // Only rows and columns with support can take part in a nonzero minor.
    let rows: Vec<usize> = (1..=a.rows()).filter(|&i| !a.row_is_zero(i)).collect();
    let cols: Vec<usize> = (1..=a.cols()).filter(|&j| !a.col_is_zero(j)).collect();
    let small: Vec<Vec<i128>> = (1..=a.rows())
        .map(|i| (1..=a.cols()).map(|j| a.get(i, j).to_integer().to_i128().expect("unit entry")).collect())
        .collect();
    for size in 2..=rows.len().min(cols.len()) {
        for rs in rows.iter().copied().combinations(size) {
            for cs in cols.iter().copied().combinations(size) {
                let d = det_i128(&rs, &cs, &small);
                if d.abs() > 1 {
                    return Some(TuCertificate { rows: rs, cols: cs, det: Rational::from_integer(d.into()) });
                }
            }
        }
    }
    None
}

/// Fraction-free (Bareiss) determinant of the submatrix `rs × cs` of `a`.
fn det_i128(rs: &[usize], cs: &[usize], a: &[Vec<i128>]) -> i128 {
    let n = rs.len();
    let mut m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i - 1][j - 1]).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Outcome of the sampled falsifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampledVerdict {
    NotTu(TuCertificate),
    Unfalsified { samples: usize },
}

/// Random square submatrices of random blocks, for matrices beyond the guard.
/// A `NotTu` answer is a proof; `Unfalsified` proves nothing.
pub fn sampled_tu_check(matrix: &ConnectionMatrix, samples: usize, seed: u64) -> SampledVerdict {
    let partition = matrix.partition();
    if let Some((at, v)) = matrix.entries().find(|(_, v)| !crate::matrix::is_unit(v)) {
        return SampledVerdict::NotTu(TuCertificate { rows: vec![at.row], cols: vec![at.col], det: v.clone() });
    }
    let blocks: Vec<(Vec<usize>, Vec<usize>)> = (1..=matrix.b())
        .map(|k| (partition.subset(k - 1), partition.subset(k)))
        .filter(|(r, c)| !r.is_empty() && !c.is_empty())
        .collect();
    if blocks.is_empty() {
        return SampledVerdict::Unfalsified { samples: 0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (rows, cols) = &blocks[rng.gen_range(0..blocks.len())];
        let size = rng.gen_range(1..=rows.len().min(cols.len()));
        let mut rs: Vec<usize> = sample(&mut rng, rows.len(), size).into_iter().map(|i| rows[i]).collect();
        let mut cs: Vec<usize> = sample(&mut rng, cols.len(), size).into_iter().map(|j| cols[j]).collect();
        rs.sort_unstable();
        cs.sort_unstable();
        let det = rational_det(&matrix.matrix().submatrix(&rs, &cs));
        if det.abs() > Rational::one() {
            return SampledVerdict::NotTu(TuCertificate { rows: rs, cols: cs, det });
        }
    }
    SampledVerdict::Unfalsified { samples }
}

/// Exact determinant by Gaussian elimination.
pub(crate) fn rational_det(a: &QMatrix) -> Rational {
    let n = a.rows();
    let mut m = a.clone();
    let mut det = Rational::one();
    for k in 1..=n {
        let Some(p) = (k..=n).find(|&i| !m.get(i, k).is_zero()) else { return Rational::zero() };
        if p != k {
            m.swap_rows(p, k);
            det = -det;
        }
        let pivot = m.get(k, k).clone();
        det *= &pivot;
        for i in k + 1..=n {
            if m.get(i, k).is_zero() {
                continue;
            }
            let f = m.get(i, k) / &pivot;
            for j in k..=n {
                let d = &f * m.get(k, j);
                m[(i, j)] -= d;
            }
        }
    }
    det
}

/// `H_0..H_b` over ℚ, treating `Δ` as a chain complex graded by the partition.
pub fn betti_over_q(matrix: &ConnectionMatrix) -> Vec<usize> {
    betti_of_labels(matrix.matrix(), matrix.partition().chain(), matrix.b())
}

/// Betti numbers of a square matrix whose `t`-th row/column has chain index `chain[t]`.
pub fn betti_of_labels(a: &QMatrix, chain: &[usize], b: usize) -> Vec<usize> {
    let group = |k: usize| -> Vec<usize> { (1..=chain.len()).filter(|&t| chain[t - 1] == k).collect() };
    let block_rank = |k: usize| -> usize {
        if k == 0 || k > b {
            return 0;
        }
        a.submatrix(&group(k - 1), &group(k)).rank()
    };
    (0..=b).map(|k| group(k).len() - block_rank(k) - block_rank(k + 1)).collect()
}
