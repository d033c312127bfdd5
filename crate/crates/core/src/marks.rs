//! Pivot marks assigned while sweeping.

use std::collections::BTreeMap;
use std::fmt;

use crate::matrix::Rational;
use crate::model::Position;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkKind {
    Primary,
    ChangeOfBasis,
}

impl fmt::Display for MarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkKind::Primary => "primary",
            MarkKind::ChangeOfBasis => "change_of_basis",
        })
    }
}

/// A mark together with the diagonal it was assigned on and the entry's value at that moment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mark {
    pub kind: MarkKind,
    pub diagonal: usize,
    pub value: Rational,
}

/// Every mark assigned during one run, in assignment order.
///
/// Change-of-basis marks only matter on the diagonal that produced them but
/// are kept here for tracing. A position never holds two marks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkRegistry {
    marks: BTreeMap<Position, Mark>,
    order: Vec<Position>,
    primary_in_col: BTreeMap<usize, Position>,
    primaries_in_row: BTreeMap<usize, Vec<Position>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MarkError {
    #[error("position {0} is already marked")]
    AlreadyMarked(Position),
    #[error("column {col} already holds the primary pivot {existing}")]
    SecondPrimaryInColumn { col: usize, existing: Position },
}

impl MarkRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mark(&mut self, at: Position, kind: MarkKind, diagonal: usize, value: Rational) -> Result<(), MarkError> {
        if self.marks.contains_key(&at) {
            return Err(MarkError::AlreadyMarked(at));
        }
        if kind == MarkKind::Primary {
            if let Some(&existing) = self.primary_in_col.get(&at.col) {
                return Err(MarkError::SecondPrimaryInColumn { col: at.col, existing });
            }
            self.primary_in_col.insert(at.col, at);
            self.primaries_in_row.entry(at.row).or_default().push(at);
        }
        self.marks.insert(at, Mark { kind, diagonal, value });
        self.order.push(at);
        Ok(())
    }

    pub fn get(&self, at: Position) -> Option<&Mark> {
        self.marks.get(&at)
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    /// The primary pivot in column `j`, if any.
    pub fn primary_in_column(&self, j: usize) -> Option<Position> {
        self.primary_in_col.get(&j).copied()
    }

    /// The first primary pivot assigned in row `i`, if any.
    pub fn primary_in_row(&self, i: usize) -> Option<Position> {
        self.primaries_in_row.get(&i).and_then(|v| v.first().copied())
    }

    /// All primary pivots in row `i`.
    pub fn primaries_in_row(&self, i: usize) -> &[Position] {
        self.primaries_in_row.get(&i).map_or(&[], Vec::as_slice)
    }

    /// Marks in assignment order.
    pub fn in_order(&self) -> impl Iterator<Item = (Position, &Mark)> + '_ {
        self.order.iter().map(move |p| (*p, &self.marks[p]))
    }

    /// All marks in `(row, col)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Position, &Mark)> + '_ {
        self.marks.iter().map(|(p, m)| (*p, m))
    }

    /// Primary pivots sorted by `(diagonal, col)`.
    pub fn primaries(&self) -> Vec<(Position, &Mark)> {
        let mut v: Vec<_> = self.iter().filter(|(_, m)| m.kind == MarkKind::Primary).collect();
        v.sort_by_key(|(p, m)| (m.diagonal, p.col));
        v
    }

    /// Marks assigned on diagonal `r`, in increasing column.
    pub fn on_diagonal(&self, r: usize) -> Vec<(Position, MarkKind)> {
        let mut v: Vec<_> = self.iter().filter(|(_, m)| m.diagonal == r).map(|(p, m)| (p, m.kind)).collect();
        v.sort_by_key(|(p, _)| p.col);
        v
    }
}
