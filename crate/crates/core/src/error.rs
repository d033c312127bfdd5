use thiserror::Error;

use crate::marks::MarkError;
use crate::model::{ModelError, Position};
use crate::tu::SurfaceRejection;

/// Failures of the sweeping and cancellation algorithms.
///
/// Apart from the precondition variants, these signal a broken invariant
/// inside an algorithm rather than a bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Mark(#[from] MarkError),
    #[error("diagonal {r} is out of range 1..={max}")]
    DiagonalOutOfRange { r: usize, max: usize },
    #[error("no integer kernel vector with positive last coordinate for the change of basis at {at} (r = {r})")]
    Infeasible { r: usize, at: Position },
    #[error("change-of-basis mark at {at} has no primary pivot in its row")]
    MissingPrimary { at: Position },
    #[error("change-of-basis mark at {at} lies in a column of chain index 0")]
    BadChangeColumn { at: Position },
    #[error("pivot entry at {at} is zero")]
    ZeroPivot { at: Position },
    #[error("matrix has nonzeros in blocks {blocks:?}; the revised sweep needs at most one nonzero block")]
    NotOneBlock { blocks: Vec<usize> },
    #[error("surface sweep needs exactly three partition subsets, found {found}")]
    WrongSubsetCount { found: usize },
    #[error("not a surface connection matrix: {0}")]
    NotSurface(SurfaceRejection),
}
