//! Accumulated and incremental sweeping over the rationals.

use num_traits::One;

use crate::error::SweepError;
use crate::marks::MarkRegistry;
use crate::matrix::{QMatrix, Rational};
use crate::model::{ConnectionMatrix, Position};
use crate::sweep_z::{conjugate_by_accumulated, mark_diagonal};
use crate::trace::{Algorithm, ChangeStep, StepDetail, SweepTrace};

pub use crate::trace::{Factor, TransitionKind, TransitionMatrix};

/// Sweep keeping the accumulated change of basis `P^r = P^{r-1} T^r`.
///
/// Each change-of-basis column is replaced by the closed-form kernel vector
/// `σ_j - α σ_p`, where `p` is the primary pivot column in the same row and
/// `α = Δ^r_{j-r,j} / Δ^r_{j-r,p}`.
pub fn sweep_accumulated(matrix: &ConnectionMatrix) -> Result<SweepTrace, SweepError> {
    let m = matrix.m();
    let partition = matrix.partition().clone();
    let delta0 = matrix.matrix().clone();
    let mut p = QMatrix::identity(m);
    let mut matrices = vec![delta0.clone()];
    let mut transitions = vec![TransitionMatrix::identity(TransitionKind::Accumulated, m)];
    let mut registry = MarkRegistry::new();
    let mut steps = Vec::new();

    for r in 1..m {
        let delta = conjugate_by_accumulated(&p, &delta0);
        let changes = mark_diagonal(&delta, r, &mut registry)?;
        // Primary columns never change on this diagonal, so updating in place is safe.
        for (at, pivot) in changes {
            let alpha = delta.get(at.row, at.col) / delta.get(pivot.row, pivot.col);
            for i in 1..=m {
                let d = &alpha * p.get(i, pivot.col);
                p[(i, at.col)] -= d;
            }
            let k = partition.chain_of(at.col);
            let columns: Vec<usize> = partition.subset(k).into_iter().filter(|&j| j <= at.col).collect();
            let y = columns
                .iter()
                .map(|&j| {
                    if j == at.col {
                        Rational::one()
                    } else if j == pivot.col {
                        -alpha.clone()
                    } else {
                        Rational::default()
                    }
                })
                .collect();
            let x = columns.iter().map(|&i| p.get(i, at.col).clone()).collect();
            steps.push(ChangeStep { r, at, pivot, alpha, detail: StepDetail::Accumulated { columns, y, x } });
        }
        matrices.push(delta);
        transitions.push(TransitionMatrix {
            kind: TransitionKind::Accumulated,
            matrix: p.clone(),
            factors: Vec::new(),
        });
    }
    matrices.push(conjugate_by_accumulated(&p, &delta0));

    Ok(SweepTrace { algorithm: Algorithm::Accumulated, partition, matrices, transitions, registry, steps })
}

/// Sweep updating `Δ^{r+1} = (T^r)^{-1} Δ^r T^r` one diagonal at a time.
pub fn sweep_incremental(matrix: &ConnectionMatrix) -> Result<SweepTrace, SweepError> {
    let m = matrix.m();
    let partition = matrix.partition().clone();
    let mut delta = matrix.matrix().clone();
    let mut matrices = vec![delta.clone()];
    let mut transitions = vec![TransitionMatrix::identity(TransitionKind::Incremental, m)];
    let mut registry = MarkRegistry::new();
    let mut steps = Vec::new();

    for r in 1..m {
        let previous = transitions.last().expect("T^0 is present");
        if !previous.factors.is_empty() {
            delta = invert_transition(previous).mul(&delta).mul(&previous.matrix);
        }
        let changes = mark_diagonal(&delta, r, &mut registry)?;
        let at: Vec<Position> = changes.iter().map(|(a, _)| *a).collect();
        let t = transition_matrix(&delta, &at, &registry)?;
        for (at, pivot) in changes {
            let alpha = delta.get(at.row, at.col) / delta.get(pivot.row, pivot.col);
            steps.push(ChangeStep { r, at, pivot, alpha, detail: StepDetail::Incremental });
        }
        matrices.push(delta.clone());
        transitions.push(t);
    }
    let last = transitions.last().expect("T^0 is present");
    matrices.push(invert_transition(last).mul(&delta).mul(&last.matrix));

    Ok(SweepTrace { algorithm: Algorithm::Incremental, partition, matrices, transitions, registry, steps })
}

/// `T^r = I - Σ_s α_s U^{p_s j_s}` for the change-of-basis marks `changes`
/// on one diagonal of `delta`, where `p_s` is the primary pivot column in the
/// row of the `s`-th mark and `α_s = Δ_{j_s-r, j_s} / Δ_{j_s-r, p_s}`.
pub fn transition_matrix(
    delta: &QMatrix,
    changes: &[Position],
    registry: &MarkRegistry,
) -> Result<TransitionMatrix, SweepError> {
    let mut factors = Vec::with_capacity(changes.len());
    for &at in changes {
        let pivot = registry.primary_in_row(at.row).ok_or(SweepError::MissingPrimary { at })?;
        let alpha = delta.get(at.row, at.col) / delta.get(pivot.row, pivot.col);
        factors.push(Factor::Elementary { row: pivot.col, col: at.col, alpha });
    }
    Ok(TransitionMatrix::from_elementary(TransitionKind::Incremental, delta.rows(), factors))
}

/// Exact inverse of a transition matrix, using its factor structure.
///
/// Elementary factors of one diagonal never chain (a change-of-basis column is
/// never a pivot column), so `(I - Σ α U)^{-1} = I + Σ α U`. Row factors are
/// inverted one at a time in reverse order. Accumulated matrices fall back to
/// triangular back substitution.
pub fn invert_transition(t: &TransitionMatrix) -> QMatrix {
    let m = t.m();
    match t.kind {
        TransitionKind::Incremental | TransitionKind::Revised => {
            let mut inv = QMatrix::identity(m);
            for f in &t.factors {
                if let Factor::Elementary { row, col, alpha } = f {
                    inv[(*row, *col)] += alpha;
                }
            }
            inv
        }
        TransitionKind::RowCancellation => {
            t.factors.iter().rev().fold(QMatrix::identity(m), |acc, f| acc.mul(&factor_matrix(f, m, true)))
        }
        TransitionKind::Integer | TransitionKind::Accumulated => {
            t.matrix.upper_triangular_inverse().expect("accumulated matrices have nonzero diagonal")
        }
    }
}

/// The matrix of one factor, or of its inverse when `inverse` is set.
pub fn factor_matrix(f: &Factor, m: usize, inverse: bool) -> QMatrix {
    let mut a = QMatrix::identity(m);
    match f {
        Factor::Elementary { row, col, alpha } => {
            a[(*row, *col)] = if inverse { alpha.clone() } else { -alpha.clone() };
        }
        Factor::Row { row, coeffs } => {
            for (j, c) in coeffs {
                a[(*row, *j)] = if inverse { c.clone() } else { -c.clone() };
            }
        }
    }
    a
}
