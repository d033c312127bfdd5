//! Diagonal sweeping over the integers.
//!
//! Every change of basis replaces a column of the accumulated matrix `P` by
//! an integer kernel vector of the original matrix with the smallest
//! possible positive leading coefficient, so `P` stays integral.

pub mod lattice;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::SweepError;
use crate::marks::{MarkKind, MarkRegistry};
use crate::matrix::{QMatrix, Rational};
use crate::model::{ConnectionMatrix, Partition, Position};
use crate::trace::{Algorithm, ChangeStep, PivotTrace, StepDetail, SweepTrace, TransitionKind, TransitionMatrix};

/// The instance `min x_c  s.t.  A x = 0, x_c ≥ 1, x ∈ ℤ^c` with `A = Δ_{IJ}`.
///
/// Columns of `a` follow `columns` (the set `J`, increasing); the last one is
/// the change-of-basis column. Rows follow `rows` (`I`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelProblem {
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub a: QMatrix,
}

impl KernelProblem {
    /// A free-standing instance with row and column labels `1..`.
    pub fn new(a: QMatrix) -> Self {
        KernelProblem { rows: (1..=a.rows()).collect(), columns: (1..=a.cols()).collect(), a }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        KernelProblem::new(QMatrix::from_i64_rows(rows))
    }

    /// Number of unknowns; `x_c` is the leading variable.
    pub fn c(&self) -> usize {
        self.a.cols()
    }

    /// For the change of basis at `at` on diagonal `r`: `I = J_{k-1} ∩ {j-r..m}`, `J = J_k ∩ {1..j}`.
    pub fn for_change(delta0: &QMatrix, partition: &Partition, at: Position) -> Option<Self> {
        let k = partition.chain_of(at.col);
        if k == 0 {
            return None;
        }
        let rows: Vec<usize> = partition.subset(k - 1).into_iter().filter(|&i| i >= at.row).collect();
        let columns: Vec<usize> = partition.subset(k).into_iter().filter(|&j| j <= at.col).collect();
        let a = delta0.submatrix(&rows, &columns);
        Some(KernelProblem { rows, columns, a })
    }
}

/// Solves a [`KernelProblem`] exactly.
///
/// The optimum is unique in its last coordinate; among optimal vectors the one
/// reduced modulo `{x ∈ ker A : x_c = 0}` by Hermite form is returned.
pub fn solve_min_leading(problem: &KernelProblem) -> Option<Vec<BigInt>> {
    let c = problem.c();
    let rows = lattice::integer_rows(&problem.a);
    let basis = lattice::kernel_basis(&rows, c);
    lattice::min_leading(basis, c)
}

/// Marks diagonal `r` of `delta` following the sweep rule and returns the
/// change-of-basis marks paired with the primary pivot in their row.
pub(crate) fn mark_diagonal(
    delta: &QMatrix,
    r: usize,
    registry: &mut MarkRegistry,
) -> Result<Vec<(Position, Position)>, SweepError> {
    let m = delta.rows();
    let mut changes = Vec::new();
    for j in r + 1..=m {
        let at = Position::new(j - r, j);
        let v = delta.get(at.row, at.col);
        if v.is_zero() || registry.primary_in_column(j).is_some() {
            continue;
        }
        match registry.primary_in_row(at.row) {
            Some(pivot) => {
                registry.mark(at, MarkKind::ChangeOfBasis, r, v.clone())?;
                changes.push((at, pivot));
            }
            None => registry.mark(at, MarkKind::Primary, r, v.clone())?,
        }
    }
    Ok(changes)
}

pub(crate) fn conjugate_by_accumulated(p: &QMatrix, delta0: &QMatrix) -> QMatrix {
    let inv = p.upper_triangular_inverse().expect("accumulated matrices have nonzero diagonal");
    inv.mul(delta0).mul(p)
}

/// Runs the integer sweep: `Δ^0..Δ^m` and `P^0..P^{m-1}`.
pub fn sweep_over_z(matrix: &ConnectionMatrix) -> Result<SweepTrace, SweepError> {
    let m = matrix.m();
    let partition = matrix.partition().clone();
    let delta0 = matrix.matrix().clone();
    let mut p = QMatrix::identity(m);
    let mut matrices = vec![delta0.clone()];
    let mut transitions = vec![TransitionMatrix::identity(TransitionKind::Integer, m)];
    let mut registry = MarkRegistry::new();
    let mut steps = Vec::new();

    for r in 1..m {
        let delta = conjugate_by_accumulated(&p, &delta0);
        for (at, pivot) in mark_diagonal(&delta, r, &mut registry)? {
            let problem =
                KernelProblem::for_change(&delta0, &partition, at).ok_or(SweepError::BadChangeColumn { at })?;
            let x = solve_min_leading(&problem).ok_or(SweepError::Infeasible { r, at })?;
            for (&i, xi) in problem.columns.iter().zip(&x) {
                p[(i, at.col)] = Rational::from_integer(xi.clone());
            }
            steps.push(ChangeStep {
                r,
                at,
                pivot,
                alpha: delta.get(at.row, at.col) / delta.get(pivot.row, pivot.col),
                detail: StepDetail::Integer { problem, x },
            });
        }
        matrices.push(delta);
        transitions.push(TransitionMatrix { kind: TransitionKind::Integer, matrix: p.clone(), factors: Vec::new() });
    }
    matrices.push(conjugate_by_accumulated(&p, &delta0));

    Ok(SweepTrace { algorithm: Algorithm::Integer, partition, matrices, transitions, registry, steps })
}

/// Marks assigned on diagonal `r`, in increasing column.
pub fn marks_on_diagonal(trace: &impl PivotTrace, r: usize) -> Result<Vec<(Position, MarkKind)>, SweepError> {
    let max = trace.partition().m().saturating_sub(1);
    if r == 0 || r > max {
        return Err(SweepError::DiagonalOutOfRange { r, max });
    }
    Ok(trace.registry().on_diagonal(r))
}
