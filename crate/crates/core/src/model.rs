//! Connection matrices, their chain-index partitions and the allowable
//! sparsity pattern.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::{QMatrix, Rational};

/// A 1-based matrix position `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }

    /// The diagonal `r` with `col = row + r`. Only meaningful above the main diagonal.
    pub fn diagonal(&self) -> usize {
        self.col - self.row
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for Position {
    fn from((row, col): (usize, usize)) -> Self {
        Position { row, col }
    }
}

/// Assignment of every index `1..=m` to a chain index `k ∈ 0..=b`.
///
/// Subsets may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    chain: Vec<usize>,
    b: usize,
}

impl Partition {
    /// `chain[j - 1]` is the chain index of label `j`.
    pub fn new(chain: Vec<usize>, b: usize) -> Result<Self, ModelError> {
        let m = chain.len();
        if m == 0 {
            return Err(ModelError::EmptyMatrix);
        }
        if b > m {
            return Err(ModelError::TooManySubsets { b, m });
        }
        if let Some((j, &k)) = chain.iter().enumerate().find(|(_, &k)| k > b) {
            return Err(ModelError::ChainIndexOutOfRange { col: j + 1, k, b });
        }
        Ok(Partition { chain, b })
    }

    /// Builds a partition from explicit subsets `J_0..J_b` of labels.
    pub fn from_subsets(subsets: &[Vec<usize>]) -> Result<Self, ModelError> {
        if subsets.is_empty() {
            return Err(ModelError::EmptyMatrix);
        }
        let m: usize = subsets.iter().map(Vec::len).sum();
        let mut chain = vec![None; m];
        for (k, set) in subsets.iter().enumerate() {
            for &j in set {
                if j == 0 || j > m {
                    return Err(ModelError::LabelOutOfRange { label: j, m });
                }
                if chain[j - 1].replace(k).is_some() {
                    return Err(ModelError::DuplicateLabel { label: j });
                }
            }
        }
        let chain = chain.into_iter().map(|k| k.expect("counted labels cover 1..m")).collect();
        Partition::new(chain, subsets.len() - 1)
    }

    /// Grouped partition with consecutive runs of the given sizes.
    pub fn grouped(sizes: &[usize]) -> Result<Self, ModelError> {
        let chain = sizes.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(k, s)).collect();
        Partition::new(chain, sizes.len().saturating_sub(1))
    }

    pub fn m(&self) -> usize {
        self.chain.len()
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Chain index of label `j` (1-based).
    pub fn chain_of(&self, j: usize) -> usize {
        self.chain[j - 1]
    }

    /// Labels of `J_k` in increasing order. Empty for `k > b`.
    pub fn subset(&self, k: usize) -> Vec<usize> {
        (1..=self.m()).filter(|&j| self.chain_of(j) == k).collect()
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        (0..=self.b).map(|k| self.subset(k)).collect()
    }

    /// All chain indices, `chain()[j - 1]` for label `j`.
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    /// True when each nonempty `J_k` is a consecutive run and the runs appear in order of `k`.
    pub fn is_grouped(&self) -> bool {
        self.chain.windows(2).all(|w| w[0] <= w[1])
    }

    /// True when `(i, j)` lies strictly above the diagonal in some `J_{k-1} × J_k`.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        i < j && self.chain_of(i) + 1 == self.chain_of(j)
    }
}

/// The strictly upper positions of `∪_k J_{k-1} × J_k`.
pub fn allowable_pattern(partition: &Partition) -> BTreeSet<Position> {
    let m = partition.m();
    let mut out = BTreeSet::new();
    for i in 1..=m {
        for j in i + 1..=m {
            if partition.allows(i, j) {
                out.insert(Position::new(i, j));
            }
        }
    }
    out
}

/// One broken invariant of a [`MatrixDraft`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `m` must be positive.
    EmptyMatrix,
    /// A label in `1..=m` has no chain index.
    LabelUncovered { label: usize },
    /// A label outside `1..=m` was given a chain index.
    LabelOutOfRange { label: usize },
    /// A chain index exceeds `b`.
    ChainIndexOutOfRange { label: usize, k: usize },
    /// `b` exceeds `m`.
    TooManySubsets { b: usize },
    /// An entry whose row or column lies outside `1..=m`.
    EntryOutOfRange { at: Position },
    /// An entry on or below the main diagonal.
    NotStrictlyUpper { at: Position },
    /// A nonzero entry outside `∪ J_{k-1} × J_k`.
    OutsidePattern { at: Position, row_chain: usize, col_chain: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyMatrix => write!(f, "partition: m must be positive"),
            Violation::LabelUncovered { label } => {
                write!(f, "partition: index {label} has no chain index")
            }
            Violation::LabelOutOfRange { label } => {
                write!(f, "partition: index {label} is out of range")
            }
            Violation::ChainIndexOutOfRange { label, k } => {
                write!(f, "partition: index {label} has chain index {k} > b")
            }
            Violation::TooManySubsets { b } => write!(f, "partition: b = {b} exceeds m"),
            Violation::EntryOutOfRange { at } => write!(f, "range: entry {at} is out of range"),
            Violation::NotStrictlyUpper { at } => {
                write!(f, "strictly upper triangular: entry {at} is on or below the diagonal")
            }
            Violation::OutsidePattern { at, row_chain, col_chain } => {
                write!(f, "allowable sparsity: entry {at} lies in J_{row_chain} x J_{col_chain}")
            }
        }
    }
}

/// Raw, possibly invalid matrix data; the input of [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatrixDraft {
    pub m: usize,
    pub b: usize,
    /// `chain[label]` for labels that were assigned; labels may be out of range.
    pub chain: BTreeMap<usize, usize>,
    pub entries: BTreeMap<Position, Rational>,
}

impl MatrixDraft {
    pub fn with_entry(mut self, i: usize, j: usize, value: Rational) -> Self {
        self.entries.insert(Position::new(i, j), value);
        self
    }
}

/// Lists every broken [`ConnectionMatrix`] invariant of `draft`. Empty iff valid.
pub fn validate(draft: &MatrixDraft) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = draft.m;
    if m == 0 {
        out.push(Violation::EmptyMatrix);
    }
    if draft.b > m {
        out.push(Violation::TooManySubsets { b: draft.b });
    }
    for (&label, &k) in &draft.chain {
        if label == 0 || label > m {
            out.push(Violation::LabelOutOfRange { label });
        } else if k > draft.b {
            out.push(Violation::ChainIndexOutOfRange { label, k });
        }
    }
    for label in 1..=m {
        if !draft.chain.contains_key(&label) {
            out.push(Violation::LabelUncovered { label });
        }
    }
    for (&at, value) in &draft.entries {
        if at.row == 0 || at.col == 0 || at.row > m || at.col > m {
            out.push(Violation::EntryOutOfRange { at });
            continue;
        }
        if at.row >= at.col {
            out.push(Violation::NotStrictlyUpper { at });
            continue;
        }
        if value.is_zero() {
            continue;
        }
        if let (Some(&ki), Some(&kj)) = (draft.chain.get(&at.row), draft.chain.get(&at.col)) {
            if ki + 1 != kj {
                out.push(Violation::OutsidePattern { at, row_chain: ki, col_chain: kj });
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("matrix order m must be positive")]
    EmptyMatrix,
    #[error("b = {b} exceeds m = {m}")]
    TooManySubsets { b: usize, m: usize },
    #[error("index {col} has chain index {k} > b = {b}")]
    ChainIndexOutOfRange { col: usize, k: usize, b: usize },
    #[error("label {label} is outside 1..{m}")]
    LabelOutOfRange { label: usize, m: usize },
    #[error("label {label} appears in more than one subset")]
    DuplicateLabel { label: usize },
    #[error("matrix is {rows}x{cols} but the partition has m = {m}")]
    ShapeMismatch { rows: usize, cols: usize, m: usize },
    #[error("invalid connection matrix: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A validated `m × m` strictly upper triangular rational matrix that
/// respects the allowable sparsity pattern of its partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionMatrix {
    partition: Partition,
    matrix: QMatrix,
}

impl ConnectionMatrix {
    /// Zero matrix over `partition`.
    pub fn zero(partition: Partition) -> Self {
        let m = partition.m();
        ConnectionMatrix { partition, matrix: QMatrix::zeros(m, m) }
    }

    pub fn from_entries<I>(partition: Partition, entries: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut draft = MatrixDraft {
            m: partition.m(),
            b: partition.b(),
            chain: (1..=partition.m()).map(|j| (j, partition.chain_of(j))).collect(),
            entries: BTreeMap::new(),
        };
        for (i, j, v) in entries {
            draft.entries.insert(Position::new(i, j), v);
        }
        ConnectionMatrix::try_from(draft)
    }

    pub fn from_matrix(partition: Partition, matrix: QMatrix) -> Result<Self, ModelError> {
        let m = partition.m();
        if matrix.rows() != m || matrix.cols() != m {
            return Err(ModelError::ShapeMismatch { rows: matrix.rows(), cols: matrix.cols(), m });
        }
        let bad: Vec<Violation> = matrix
            .nonzeros()
            .filter_map(|(i, j, _)| {
                let at = Position::new(i, j);
                if i >= j {
                    Some(Violation::NotStrictlyUpper { at })
                } else if !partition.allows(i, j) {
                    Some(Violation::OutsidePattern {
                        at,
                        row_chain: partition.chain_of(i),
                        col_chain: partition.chain_of(j),
                    })
                } else {
                    None
                }
            })
            .collect();
        if bad.is_empty() {
            Ok(ConnectionMatrix { partition, matrix })
        } else {
            Err(ModelError::Invalid(bad))
        }
    }

    pub fn m(&self) -> usize {
        self.partition.m()
    }

    pub fn b(&self) -> usize {
        self.partition.b()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (Position, &Rational)> + '_ {
        self.matrix.nonzeros().map(|(i, j, v)| (Position::new(i, j), v))
    }

    pub fn nnz(&self) -> usize {
        self.entries().count()
    }

    /// The block `Δ_{J_{k-1} J_k}` with rows and columns in label order.
    pub fn block(&self, k: usize) -> QMatrix {
        let rows = self.partition.subset(k - 1);
        let cols = self.partition.subset(k);
        self.matrix.submatrix(&rows, &cols)
    }

    /// First nonzero position of `Δ·Δ`, if any. A boundary map has none.
    pub fn square_defect(&self) -> Option<Position> {
        let sq = self.matrix.mul(&self.matrix);
        let first = sq.nonzeros().next().map(|(i, j, _)| Position::new(i, j));
        first
    }

    /// True when `Δ·Δ = 0`, i.e. the matrix is a differential.
    pub fn is_chain_complex(&self) -> bool {
        self.square_defect().is_none()
    }

    pub fn to_draft(&self) -> MatrixDraft {
        MatrixDraft {
            m: self.m(),
            b: self.b(),
            chain: (1..=self.m()).map(|j| (j, self.partition.chain_of(j))).collect(),
            entries: self.entries().map(|(p, v)| (p, v.clone())).collect(),
        }
    }
}

impl TryFrom<MatrixDraft> for ConnectionMatrix {
    type Error = ModelError;

    fn try_from(draft: MatrixDraft) -> Result<Self, ModelError> {
        let violations = validate(&draft);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let chain = (1..=draft.m).map(|j| draft.chain[&j]).collect();
        let partition = Partition::new(chain, draft.b)?;
        let mut matrix = QMatrix::zeros(draft.m, draft.m);
        for (at, v) in draft.entries {
            matrix[(at.row, at.col)] = v;
        }
        Ok(ConnectionMatrix { partition, matrix })
    }
}
