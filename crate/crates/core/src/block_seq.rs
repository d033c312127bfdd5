//! Block-sequential sweeping and the revised one-block sweep.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::SweepError;
use crate::marks::{MarkKind, MarkRegistry};
use crate::matrix::QMatrix;
use crate::model::{ConnectionMatrix, Position};
use crate::sweep_f::sweep_incremental;
use crate::trace::{Algorithm, Factor, PivotTrace, SweepTrace, TransitionKind, TransitionMatrix};

/// One block of a block-sequential run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRun<T> {
    /// Block number, `1..=b`.
    pub k: usize,
    /// `Δ(k)`: `Δ` on `J_{k-1} × J_k`, zero elsewhere, rows of the previous pivot columns zeroed.
    pub input: ConnectionMatrix,
    pub trace: T,
    /// Columns of the final matrix of this run that hold primary pivots.
    pub pivot_columns: BTreeSet<usize>,
}

/// `Δ(k)`: keep `Δ_{J_{k-1} J_k}`, drop the rows in `zeroed`.
pub fn block_input(matrix: &ConnectionMatrix, k: usize, zeroed: &BTreeSet<usize>) -> ConnectionMatrix {
    let partition = matrix.partition();
    let m = matrix.m();
    let mut a = QMatrix::zeros(m, m);
    for (at, v) in matrix.entries() {
        if partition.chain_of(at.col) == k && !zeroed.contains(&at.row) {
            a[(at.row, at.col)] = v.clone();
        }
    }
    ConnectionMatrix::from_matrix(partition.clone(), a).expect("a sub-pattern of a valid matrix is valid")
}

/// Generic driver: run `sweep` on `Δ(1), …, Δ(b)` feeding each run's pivot columns into the next.
pub fn run_blocks<T, F>(matrix: &ConnectionMatrix, mut sweep: F) -> Result<Vec<BlockRun<T>>, SweepError>
where
    T: PivotTrace,
    F: FnMut(&ConnectionMatrix) -> Result<T, SweepError>,
{
    let mut runs: Vec<BlockRun<T>> = Vec::with_capacity(matrix.b());
    let mut zeroed = BTreeSet::new();
    for k in 1..=matrix.b() {
        let input = block_input(matrix, k, &zeroed);
        let trace = sweep(&input)?;
        let pivot_columns: BTreeSet<usize> = trace.primary_pivots().into_iter().map(|(p, _)| p.col).collect();
        zeroed = pivot_columns.clone();
        runs.push(BlockRun { k, input, trace, pivot_columns });
    }
    Ok(runs)
}

/// Runs the incremental sweep block by block.
pub fn block_sequential_sweep(matrix: &ConnectionMatrix) -> Result<Vec<BlockRun<SweepTrace>>, SweepError> {
    run_blocks(matrix, sweep_incremental)
}

/// Chain indices `k` whose block `J_{k-1} × J_k` holds a nonzero entry.
pub fn nonzero_blocks(matrix: &ConnectionMatrix) -> Vec<usize> {
    let set: BTreeSet<usize> = matrix.entries().map(|(at, _)| matrix.partition().chain_of(at.col)).collect();
    set.into_iter().collect()
}

/// Column-echelon sweep of a matrix with at most one nonzero block.
///
/// Repeatedly takes the lowest row `i_t` with support in the active columns,
/// makes its leftmost nonzero `(i_t, j_t)` a primary pivot, clears the rest of
/// that row among the active columns by column operations and retires `j_t`.
/// `matrices[0]` is the input and `matrices[t]` the state after `t` pivots.
pub fn revised_one_block(matrix: &ConnectionMatrix) -> Result<SweepTrace, SweepError> {
    let blocks = nonzero_blocks(matrix);
    if blocks.len() > 1 {
        return Err(SweepError::NotOneBlock { blocks });
    }
    let m = matrix.m();
    let mut delta = matrix.matrix().clone();
    let mut active: BTreeSet<usize> = (1..=m).collect();
    let mut matrices = vec![delta.clone()];
    let mut transitions = Vec::new();
    let mut registry = MarkRegistry::new();

    loop {
        let lowest = (1..=m).rev().find(|&i| active.iter().any(|&j| !delta.get(i, j).is_zero()));
        let Some(i) = lowest else { break };
        let j = *active.iter().find(|&&j| !delta.get(i, j).is_zero()).expect("row has active support");
        let at = Position::new(i, j);
        let pivot = delta.get(i, j).clone();
        registry.mark(at, MarkKind::Primary, at.diagonal(), pivot.clone())?;
        let factors: Vec<Factor> = active
            .range(j + 1..)
            .filter(|&&q| !delta.get(i, q).is_zero())
            .map(|&q| Factor::Elementary { row: j, col: q, alpha: delta.get(i, q) / &pivot })
            .collect();
        let t = TransitionMatrix::from_elementary(TransitionKind::Revised, m, factors);
        delta = delta.mul(&t.matrix);
        active.remove(&j);
        matrices.push(delta.clone());
        transitions.push(t);
    }

    Ok(SweepTrace {
        algorithm: Algorithm::RevisedOneBlock,
        partition: matrix.partition().clone(),
        matrices,
        transitions,
        registry,
        steps: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::q;

    #[test]
    fn sphere_blocks() {
        let runs = block_sequential_sweep(&fixtures::sphere()).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].pivot_columns, BTreeSet::from([3]));
        assert!(runs[1].input.matrix().is_zero());
        assert!(runs[1].pivot_columns.is_empty());
    }

    #[test]
    fn zero_and_tucb_blocks() {
        assert!(block_sequential_sweep(&fixtures::zero()).unwrap().iter().all(|r| r.pivot_columns.is_empty()));
        let runs = block_sequential_sweep(&fixtures::tucb()).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].pivot_columns, BTreeSet::from([3]));
    }

    #[test]
    fn revised_examples() {
        let t = revised_one_block(&fixtures::tucb()).unwrap();
        assert_eq!(t.primary_pivots(), vec![(Position::new(2, 3), q(-1))]);
        assert_eq!(t.transitions.len(), 1);
        assert!(t.final_matrix().col_is_zero(4));

        let t = revised_one_block(&fixtures::zero()).unwrap();
        assert!(t.registry.is_empty());
        assert_eq!(t.matrices.len(), 1);

        let t = revised_one_block(&fixtures::cb()).unwrap();
        assert_eq!(t.primary_pivots(), vec![(Position::new(2, 3), q(-2))]);
        let nz: Vec<_> = t.final_matrix().nonzeros().map(|(i, j, v)| (i, j, v.clone())).collect();
        assert_eq!(nz, vec![(1, 3, q(2)), (2, 3, q(-2))]);
    }

    #[test]
    fn revised_rejects_two_blocks() {
        let a = ConnectionMatrix::from_entries(
            crate::model::Partition::grouped(&[1, 1, 1]).unwrap(),
            [(1, 2, q(1)), (2, 3, q(1))],
        )
        .unwrap();
        assert_eq!(revised_one_block(&a), Err(SweepError::NotOneBlock { blocks: vec![1, 2] }));
    }
}
