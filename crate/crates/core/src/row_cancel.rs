//! Row cancellation, its surface specialization, cancellation schedules and
//! the reduced-complex sequence.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::block_seq::{run_blocks, BlockRun};
use crate::error::SweepError;
use crate::marks::{MarkKind, MarkRegistry};
use crate::matrix::QMatrix;
use crate::model::{ConnectionMatrix, Partition, Position};
use crate::sweep_f::{factor_matrix, invert_transition};
use crate::trace::{Algorithm, Factor, PivotTrace, TransitionKind, TransitionMatrix};
use crate::tu::{is_surface_connection_matrix, SurfaceVerdict};

/// Record of a row-cancellation run: `matrices` holds `Δ̃^0..Δ̃^{m-1}`,
/// `transitions` holds `T̃^0..T̃^{m-2}`. Only primary marks occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RCTrace {
    pub algorithm: Algorithm,
    pub partition: Partition,
    pub matrices: Vec<QMatrix>,
    pub transitions: Vec<TransitionMatrix>,
    pub registry: MarkRegistry,
}

impl PivotTrace for RCTrace {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }
    fn partition(&self) -> &Partition {
        &self.partition
    }
    fn registry(&self) -> &MarkRegistry {
        &self.registry
    }
    fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }
    fn transitions(&self) -> &[TransitionMatrix] {
        &self.transitions
    }
}

impl RCTrace {
    pub fn m(&self) -> usize {
        self.partition.m()
    }

    /// `Δ̃^r`, reading `Δ̃^m` as `Δ̃^{m-1}`.
    pub fn matrix_at(&self, r: usize) -> &QMatrix {
        &self.matrices[r.min(self.matrices.len() - 1)]
    }
}

/// `T̃^r` for the primary pivots `pivots` just marked on diagonal `r` of `delta`.
///
/// Each pivot `(j_s - r, j_s)` with value `a` contributes the factor whose row
/// `j_s` is `e_{j_s} - (1/a)(0, …, 0, Δ̃_{j_s-r, j_s+1}, …, Δ̃_{j_s-r, m})`;
/// the factors are multiplied left to right in increasing column.
pub fn rc_transition(delta: &QMatrix, r: usize, pivots: &[Position]) -> Result<TransitionMatrix, SweepError> {
    let m = delta.rows();
    if pivots.is_empty() || r + 1 >= m {
        return Ok(TransitionMatrix::identity(TransitionKind::RowCancellation, m));
    }
    let mut sorted = pivots.to_vec();
    sorted.sort_by_key(|p| p.col);
    let mut factors = Vec::with_capacity(sorted.len());
    for at in sorted {
        let a = delta.get(at.row, at.col);
        if a.is_zero() {
            return Err(SweepError::ZeroPivot { at });
        }
        let coeffs = (at.col + 1..=m)
            .filter(|&j| !delta.get(at.row, j).is_zero())
            .map(|j| (j, delta.get(at.row, j) / a))
            .collect();
        factors.push(Factor::Row { row: at.col, coeffs });
    }
    let matrix = factors.iter().fold(QMatrix::identity(m), |acc, f| acc.mul(&factor_matrix(f, m, false)));
    Ok(TransitionMatrix { kind: TransitionKind::RowCancellation, matrix, factors })
}

/// Row cancellation: every freshly marked primary pivot clears its row to the right.
pub fn row_cancellation(matrix: &ConnectionMatrix) -> Result<RCTrace, SweepError> {
    run_row_cancellation(matrix, Algorithm::RowCancellation)
}

fn run_row_cancellation(matrix: &ConnectionMatrix, algorithm: Algorithm) -> Result<RCTrace, SweepError> {
    let m = matrix.m();
    let mut delta = matrix.matrix().clone();
    let mut matrices = vec![delta.clone()];
    let mut transitions = Vec::new();
    if m >= 2 {
        transitions.push(TransitionMatrix::identity(TransitionKind::RowCancellation, m));
    }
    let mut registry = MarkRegistry::new();

    for r in 1..m {
        let previous = transitions.last().expect("T̃^0 is present when m >= 2");
        if !previous.factors.is_empty() {
            delta = invert_transition(previous).mul(&delta).mul(&previous.matrix);
        }
        let mut marked = Vec::new();
        for j in r + 1..=m {
            let at = Position::new(j - r, j);
            let v = delta.get(at.row, at.col);
            if !v.is_zero() && registry.primary_in_column(j).is_none() {
                registry.mark(at, MarkKind::Primary, r, v.clone())?;
                marked.push(at);
            }
        }
        matrices.push(delta.clone());
        if r + 1 < m {
            transitions.push(rc_transition(&delta, r, &marked)?);
        }
    }

    Ok(RCTrace { algorithm, partition: matrix.partition().clone(), matrices, transitions, registry })
}

/// Row cancellation block by block.
pub fn block_sequential_row_cancellation(matrix: &ConnectionMatrix) -> Result<Vec<BlockRun<RCTrace>>, SweepError> {
    run_blocks(matrix, row_cancellation)
}

/// Row cancellation restricted to surface connection matrices.
pub fn smale_cancellation_sweep(matrix: &ConnectionMatrix) -> Result<RCTrace, SweepError> {
    match is_surface_connection_matrix(matrix) {
        Err(e) => Err(e),
        Ok(SurfaceVerdict::Rejected(why)) => Err(SweepError::NotSurface(why)),
        Ok(SurfaceVerdict::Accepted(_)) => run_row_cancellation(matrix, Algorithm::Smale),
    }
}

/// An algebraic cancellation scheduled at page `page`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScheduleEntry {
    pub page: usize,
    pub pivot: Position,
}

impl ScheduleEntry {
    /// Filtration indices `(i - 1, j - 1)` of the two modules that vanish.
    pub fn pair(&self) -> (usize, usize) {
        (self.pivot.row - 1, self.pivot.col - 1)
    }
}

/// One entry per primary pivot, sorted by `(page, column)`.
pub fn cancellation_schedule(trace: &impl PivotTrace) -> Vec<ScheduleEntry> {
    trace.registry().primaries().into_iter().map(|(pivot, mark)| ScheduleEntry { page: mark.diagonal, pivot }).collect()
}

/// A pair of indices removed from the complex, with the diagonal of its pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemovedPair {
    pub pivot: Position,
    pub diagonal: usize,
}

/// `Δ̂^r` on the surviving labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub r: usize,
    /// Surviving original labels, increasing.
    pub labels: Vec<usize>,
    pub matrix: QMatrix,
    /// Pairs removed for the first time at this step.
    pub removed: Vec<RemovedPair>,
}

impl ReductionStep {
    /// Chain index of each surviving label, in `labels` order.
    pub fn chain(&self, partition: &Partition) -> Vec<usize> {
        self.labels.iter().map(|&j| partition.chain_of(j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub partition: Partition,
    /// Steps `r = 0..=m`.
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn last(&self) -> &ReductionStep {
        self.steps.last().expect("at least one step")
    }
}

/// Deletes, cumulatively, the rows and columns of both indices of every
/// primary pivot on a diagonal `< r` from `Δ̃^r`, for `r = 0..=m`.
///
/// A pivot marked on diagonal `r` is only isolated once its row has been
/// cleared, which happens in `Δ̃^{r+1}`; removing it from `Δ̃^r` itself would
/// change the homology whenever entries remain to its right.
pub fn reduce_complex(trace: &RCTrace) -> ReductionTrace {
    let m = trace.m();
    let primaries = trace.registry.primaries();
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut steps = Vec::with_capacity(m + 1);
    for r in 0..=m {
        let fresh: Vec<RemovedPair> = primaries
            .iter()
            .filter(|(_, mark)| mark.diagonal + 1 == r)
            .map(|(pivot, mark)| RemovedPair { pivot: *pivot, diagonal: mark.diagonal })
            .collect();
        for p in &fresh {
            removed.insert(p.pivot.row);
            removed.insert(p.pivot.col);
        }
        let labels: Vec<usize> = (1..=m).filter(|j| !removed.contains(j)).collect();
        let matrix = trace.matrix_at(r).submatrix(&labels, &labels);
        steps.push(ReductionStep { r, labels, matrix, removed: fresh });
    }
    ReductionTrace { partition: trace.partition.clone(), steps }
}
