//! The CMX text format.
//!
//! ```text
//! CMX 1
//! m 4
//! b 2
//! index 1 0
//! index 2 0
//! index 3 1
//! index 4 2
//! entry 1 3 1
//! entry 2 3 -1
//! ```
//!
//! `#` starts a comment that runs to the end of the line; blank lines are
//! ignored. Entry values are `num` or `num/den` with `den > 0`; unreduced
//! fractions are accepted and the writer always emits reduced ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::{parse_rational, QMatrix, Rational};
use crate::model::{ConnectionMatrix, Partition, Position};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmxError {
    #[error("line {line}, column {column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: {what} {value} is out of range")]
    OutOfRange { line: usize, column: usize, what: &'static str, value: String },
    #[error("line {line}, column {column}: index {col} is assigned twice")]
    DuplicateIndex { line: usize, column: usize, col: usize },
    #[error("line {line}, column {column}: duplicate entry {at}")]
    DuplicateEntry { line: usize, column: usize, at: Position },
    #[error("line {line}, column {column}: entry {at} is on or below the diagonal")]
    NotStrictlyUpper { line: usize, column: usize, at: Position },
    #[error(
        "line {line}, column {column}: entry {at} lies in J_{row_chain} x J_{col_chain}, outside the allowable pattern"
    )]
    OutsidePattern { line: usize, column: usize, at: Position, row_chain: usize, col_chain: usize },
    #[error("line {line}: partition does not cover indices {missing:?}")]
    PartitionNotCovering { line: usize, missing: Vec<usize> },
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &body[s..k], column: s + 1 });
                start = None;
            }
            (false, None) => start = Some(k),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &body[s..], column: s + 1 });
    }
    out
}

struct Line<'a> {
    number: usize,
    toks: Vec<Token<'a>>,
    end_column: usize,
}

impl Line<'_> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> CmxError {
        CmxError::Syntax { line: self.number, column, message: message.into() }
    }

    fn expect_keyword(&self, keyword: &str, arity: usize) -> Result<(), CmxError> {
        let first = &self.toks[0];
        if first.text != keyword {
            return Err(self.syntax(first.column, format!("expected `{keyword}`, found `{}`", first.text)));
        }
        if self.toks.len() != arity + 1 {
            let column = self.toks.get(arity + 1).map_or(self.end_column, |t| t.column);
            return Err(
                self.syntax(column, format!("`{keyword}` takes {arity} argument(s), found {}", self.toks.len() - 1))
            );
        }
        Ok(())
    }

    fn uint(&self, k: usize) -> Result<usize, CmxError> {
        let t = &self.toks[k];
        if !t.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.syntax(t.column, format!("expected a nonnegative integer, found `{}`", t.text)));
        }
        t.text.parse().map_err(|_| CmxError::OutOfRange {
            line: self.number,
            column: t.column,
            what: "integer",
            value: t.text.to_string(),
        })
    }
}

/// Parses and validates a CMX document.
pub fn parse_cmx(text: &str) -> Result<ConnectionMatrix, CmxError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| Line { number: n + 1, toks: tokens(l), end_column: l.len() + 1 })
        .filter(|l| !l.toks.is_empty());
    let eof_line = text.lines().count().max(1);
    let eof = |what: &str| CmxError::Syntax {
        line: eof_line,
        column: 1,
        message: format!("unexpected end of input, expected {what}"),
    };

    let header = lines.next().ok_or_else(|| eof("`CMX 1`"))?;
    header.expect_keyword("CMX", 1)?;
    if header.toks[1].text != "1" {
        return Err(header.syntax(header.toks[1].column, "unsupported CMX version"));
    }

    let line = lines.next().ok_or_else(|| eof("`m <int>`"))?;
    line.expect_keyword("m", 1)?;
    let m = line.uint(1)?;
    if m == 0 {
        return Err(CmxError::OutOfRange {
            line: line.number,
            column: line.toks[1].column,
            what: "matrix order",
            value: "0".into(),
        });
    }

    let line = lines.next().ok_or_else(|| eof("`b <int>`"))?;
    line.expect_keyword("b", 1)?;
    let b = line.uint(1)?;
    if b > m {
        return Err(CmxError::OutOfRange {
            line: line.number,
            column: line.toks[1].column,
            what: "b",
            value: b.to_string(),
        });
    }

    let mut chain: Vec<Option<usize>> = vec![None; m];
    let mut assigned = 0;
    while assigned < m {
        let Some(line) = lines.next() else {
            return Err(CmxError::PartitionNotCovering { line: eof_line, missing: missing(&chain) });
        };
        if line.toks[0].text != "index" {
            return Err(CmxError::PartitionNotCovering { line: line.number, missing: missing(&chain) });
        }
        line.expect_keyword("index", 2)?;
        let col = line.uint(1)?;
        let k = line.uint(2)?;
        if col == 0 || col > m {
            return Err(CmxError::OutOfRange {
                line: line.number,
                column: line.toks[1].column,
                what: "index",
                value: col.to_string(),
            });
        }
        if k > b {
            return Err(CmxError::OutOfRange {
                line: line.number,
                column: line.toks[2].column,
                what: "chain index",
                value: k.to_string(),
            });
        }
        if chain[col - 1].replace(k).is_some() {
            return Err(CmxError::DuplicateIndex { line: line.number, column: line.toks[1].column, col });
        }
        assigned += 1;
    }
    let chain: Vec<usize> = chain.into_iter().map(|k| k.expect("all assigned")).collect();
    let partition = Partition::new(chain, b).expect("header checks bound b and every k");

    let mut entries: BTreeMap<Position, Rational> = BTreeMap::new();
    for line in lines {
        if line.toks[0].text == "index" {
            let col = line.toks.get(1).and_then(|t| t.text.parse().ok()).unwrap_or(0);
            return Err(CmxError::DuplicateIndex { line: line.number, column: line.toks[0].column, col });
        }
        line.expect_keyword("entry", 3)?;
        let i = line.uint(1)?;
        let j = line.uint(2)?;
        for (k, v) in [(1, i), (2, j)] {
            if v == 0 || v > m {
                return Err(CmxError::OutOfRange {
                    line: line.number,
                    column: line.toks[k].column,
                    what: "entry index",
                    value: v.to_string(),
                });
            }
        }
        let vt = &line.toks[3];
        let value = parse_rational(vt.text)
            .ok_or_else(|| line.syntax(vt.column, format!("malformed rational `{}`", vt.text)))?;
        let at = Position::new(i, j);
        let column = line.toks[1].column;
        if i >= j {
            return Err(CmxError::NotStrictlyUpper { line: line.number, column, at });
        }
        if entries.contains_key(&at) {
            return Err(CmxError::DuplicateEntry { line: line.number, column, at });
        }
        if !num_traits::Zero::is_zero(&value) && !partition.allows(i, j) {
            return Err(CmxError::OutsidePattern {
                line: line.number,
                column,
                at,
                row_chain: partition.chain_of(i),
                col_chain: partition.chain_of(j),
            });
        }
        entries.insert(at, value);
    }

    let mut matrix = QMatrix::zeros(m, m);
    for (at, v) in entries {
        matrix[(at.row, at.col)] = v;
    }
    Ok(ConnectionMatrix::from_matrix(partition, matrix).expect("entries checked while parsing"))
}

fn missing(chain: &[Option<usize>]) -> Vec<usize> {
    chain.iter().enumerate().filter(|(_, k)| k.is_none()).map(|(j, _)| j + 1).collect()
}

/// Canonical CMX text: header, index lines in label order, nonzero entries in `(i, j)` order.
pub fn serialize_cmx(matrix: &ConnectionMatrix) -> String {
    let mut out = format!("CMX 1\nm {}\nb {}\n", matrix.m(), matrix.b());
    for j in 1..=matrix.m() {
        writeln!(out, "index {j} {}", matrix.partition().chain_of(j)).unwrap();
    }
    out.push_str(&entry_lines(matrix.matrix()));
    out
}

/// `entry i j q` lines for every nonzero of `a`, using the given row and
/// column labels (defaults to `1..`).
pub fn entry_lines_labelled(a: &QMatrix, rows: &[usize], cols: &[usize]) -> String {
    let mut out = String::new();
    for (i, j, v) in a.nonzeros() {
        writeln!(out, "entry {} {} {v}", rows[i - 1], cols[j - 1]).unwrap();
    }
    out
}

/// `entry i j q` lines for every nonzero of `a`.
pub fn entry_lines(a: &QMatrix) -> String {
    let rows: Vec<usize> = (1..=a.rows()).collect();
    let cols: Vec<usize> = (1..=a.cols()).collect();
    entry_lines_labelled(a, &rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const SPHERE: &str = "CMX 1\nm 4\nb 2\nindex 1 0\nindex 2 0\nindex 3 1\nindex 4 2\nentry 1 3 1\nentry 2 3 -1\n";

    #[test]
    fn sphere_text_parses() {
        let a = parse_cmx(SPHERE).unwrap();
        assert_eq!(a, fixtures::sphere());
        assert_eq!(a.nnz(), 2);
        assert_eq!(serialize_cmx(&a), SPHERE);
    }

    #[test]
    fn zero_fixture_is_header_only() {
        let text = serialize_cmx(&fixtures::zero());
        assert_eq!(text, "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\n");
        assert_eq!(parse_cmx(&text).unwrap().nnz(), 0);
    }

    #[test]
    fn cb_has_four_sorted_entries() {
        let text = serialize_cmx(&fixtures::cb());
        let entries: Vec<&str> = text.lines().filter(|l| l.starts_with("entry")).collect();
        assert_eq!(entries, ["entry 1 3 2", "entry 1 4 3", "entry 2 3 -2", "entry 2 4 -3"]);
    }

    #[test]
    fn comments_blank_lines_and_unreduced_fractions() {
        let text = "# sphere\nCMX 1\n\nm 4 # order\nb 2\nindex 4 2\nindex 3 1\nindex 2 0\nindex 1 0\nentry 1 3 2/2\nentry 2 3 -4/4\n";
        assert_eq!(parse_cmx(text).unwrap(), fixtures::sphere());
    }

    #[test]
    fn diagonal_entry_is_rejected() {
        let text = "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\nentry 3 3 1\n";
        assert!(matches!(parse_cmx(text), Err(CmxError::NotStrictlyUpper { line: 7, column: 7, .. })));
    }

    #[test]
    fn error_kinds() {
        let base = "CMX 1\nm 4\nb 2\nindex 1 0\nindex 2 0\nindex 3 1\nindex 4 2\n";
        let err = |tail: &str| parse_cmx(&format!("{base}{tail}")).unwrap_err();
        assert!(matches!(err("entry 1 4 1\n"), CmxError::OutsidePattern { line: 8, .. }));
        assert!(matches!(err("entry 1 3 1\nentry 1 3 2\n"), CmxError::DuplicateEntry { line: 9, .. }));
        assert!(matches!(err("entry 1 5 1\n"), CmxError::OutOfRange { line: 8, column: 9, .. }));
        assert!(matches!(err("entry 1 3 x\n"), CmxError::Syntax { line: 8, column: 11, .. }));
        assert!(matches!(err("entry 1 3 1/0\n"), CmxError::Syntax { .. }));
        assert!(matches!(err("entry 1 3\n"), CmxError::Syntax { line: 8, .. }));
        assert!(matches!(err("index 1 0\n"), CmxError::DuplicateIndex { .. }));
        assert!(matches!(
            parse_cmx("CMX 1\nm 3\nb 1\nindex 1 0\nindex 3 1\nentry 1 3 1\n"),
            Err(CmxError::PartitionNotCovering { line: 6, .. })
        ));
        assert!(matches!(parse_cmx("CMX 2\n"), Err(CmxError::Syntax { line: 1, column: 5, .. })));
        assert!(matches!(parse_cmx(""), Err(CmxError::Syntax { .. })));
        assert!(matches!(
            parse_cmx("CMX 1\nm 2\nb 1\nindex 1 0\nindex 1 1\n"),
            Err(CmxError::DuplicateIndex { line: 5, .. })
        ));
        assert!(matches!(
            parse_cmx("CMX 1\nm 2\nb 1\nindex 1 0\nindex 2 2\n"),
            Err(CmxError::OutOfRange { what: "chain index", .. })
        ));
    }
}
