//! Run records shared by the sweeping algorithms.

use std::fmt;

use num_bigint::BigInt;

use crate::marks::MarkRegistry;
use crate::matrix::{QMatrix, Rational};
use crate::model::{Partition, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Integer,
    Accumulated,
    Incremental,
    RevisedOneBlock,
    RowCancellation,
    Smale,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Integer => "z",
            Algorithm::Accumulated => "accumulated",
            Algorithm::Incremental => "incremental",
            Algorithm::RevisedOneBlock => "revised1",
            Algorithm::RowCancellation => "rowcancel",
            Algorithm::Smale => "smale",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    /// Accumulated `P^r` of the integer sweep; nonzero, not necessarily unit, diagonal.
    Integer,
    /// Accumulated `P^r = P^{r-1} T^r` over the rationals.
    Accumulated,
    /// Per-diagonal `T^r = I - Σ α U^{pj}`.
    Incremental,
    /// Per-pivot column elimination of the revised one-block sweep.
    Revised,
    /// Row-cancellation `T̃^r = T̃^{r,1} ⋯ T̃^{r,t}`.
    RowCancellation,
}

/// One factor of a transition matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `I - alpha · U^{row,col}`.
    Elementary { row: usize, col: usize, alpha: Rational },
    /// Identity except row `row`, which is `e_row - Σ c_j e_j` over `coeffs = [(j, c_j)]`.
    Row { row: usize, coeffs: Vec<(usize, Rational)> },
}

/// A change-of-basis matrix together with the factors it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub kind: TransitionKind,
    pub matrix: QMatrix,
    pub factors: Vec<Factor>,
}

impl TransitionMatrix {
    pub fn identity(kind: TransitionKind, m: usize) -> Self {
        TransitionMatrix { kind, matrix: QMatrix::identity(m), factors: Vec::new() }
    }

    /// Builds the matrix `I - Σ alpha U^{row,col}` from elementary factors.
    pub fn from_elementary(kind: TransitionKind, m: usize, factors: Vec<Factor>) -> Self {
        let mut matrix = QMatrix::identity(m);
        for f in &factors {
            if let Factor::Elementary { row, col, alpha } = f {
                matrix[(*row, *col)] -= alpha;
            }
        }
        TransitionMatrix { kind, matrix, factors }
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }
}

/// Details of one change-of-basis step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepDetail {
    Incremental,
    /// Closed-form rational replacement over columns `columns` (`J`): `x = P_{JJ} y`.
    Accumulated {
        columns: Vec<usize>,
        y: Vec<Rational>,
        x: Vec<Rational>,
    },
    /// Integer replacement solving the lattice problem.
    Integer {
        problem: crate::sweep_z::KernelProblem,
        x: Vec<BigInt>,
    },
}

/// A change-of-basis pivot `at` eliminated using the primary pivot `pivot` in the same row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeStep {
    pub r: usize,
    pub at: Position,
    pub pivot: Position,
    /// `Δ^r_{at} / Δ^r_{pivot}`; the transition entry at `(pivot.col, at.col)` is its negative.
    pub alpha: Rational,
    pub detail: StepDetail,
}

/// Full record of a sweep: `matrices[r]` is `Δ^r`, `transitions[r]` is `P^r`
/// (accumulated variants) or `T^r` (incremental variants).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepTrace {
    pub algorithm: Algorithm,
    pub partition: Partition,
    pub matrices: Vec<QMatrix>,
    pub transitions: Vec<TransitionMatrix>,
    pub registry: MarkRegistry,
    pub steps: Vec<ChangeStep>,
}

impl SweepTrace {
    pub fn m(&self) -> usize {
        self.partition.m()
    }

    pub fn initial_matrix(&self) -> &QMatrix {
        &self.matrices[0]
    }

    pub fn final_matrix(&self) -> &QMatrix {
        self.matrices.last().expect("a trace holds at least the input")
    }

    /// `Π T` (or `P`) up to and including `transitions[r]`: column `j` expresses
    /// the basis element `σ^{r+1}_j` in the original basis `h`.
    pub fn accumulated(&self, r: usize) -> QMatrix {
        match self.transitions[r].kind {
            TransitionKind::Integer | TransitionKind::Accumulated => self.transitions[r].matrix.clone(),
            _ => self.transitions[..=r].iter().fold(QMatrix::identity(self.m()), |acc, t| acc.mul(&t.matrix)),
        }
    }

    /// Coefficients of `σ^r_j` in `h` as the columns of a matrix, for `1 <= r <= transitions.len()`.
    pub fn basis(&self, r: usize) -> QMatrix {
        self.accumulated(r - 1)
    }

    /// Every accumulated change of basis, `accumulated(0), accumulated(1), …`, computed in one pass.
    pub fn all_bases(&self) -> Vec<QMatrix> {
        let mut out = Vec::with_capacity(self.transitions.len());
        let mut acc = QMatrix::identity(self.m());
        for t in &self.transitions {
            acc = match t.kind {
                TransitionKind::Integer | TransitionKind::Accumulated => t.matrix.clone(),
                _ => acc.mul(&t.matrix),
            };
            out.push(acc.clone());
        }
        out
    }
}

/// Read access shared by every trace type that carries primary pivots.
pub trait PivotTrace {
    fn algorithm(&self) -> Algorithm;
    fn partition(&self) -> &Partition;
    fn registry(&self) -> &MarkRegistry;
    fn matrices(&self) -> &[QMatrix];
    fn transitions(&self) -> &[TransitionMatrix];

    fn final_matrix(&self) -> &QMatrix {
        self.matrices().last().expect("a trace holds at least the input")
    }

    /// Primary pivots `(position, value at marking)` sorted by `(diagonal, col)`.
    fn primary_pivots(&self) -> Vec<(Position, Rational)> {
        self.registry().primaries().into_iter().map(|(p, m)| (p, m.value.clone())).collect()
    }
}

impl PivotTrace for SweepTrace {
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
