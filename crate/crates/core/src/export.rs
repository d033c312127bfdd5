//! Text artifacts: traces, pivot lists and cancellation schedules.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::block_seq::BlockRun;
use crate::cmx::entry_lines;
use crate::matrix::{parse_rational, Rational};
use crate::row_cancel::{ReductionStep, ScheduleEntry};
use crate::trace::PivotTrace;

/// How much of each iteration the trace file records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verbosity {
    /// Marks and transition matrices.
    Pivots,
    /// As `Pivots`, plus the final matrix.
    Final,
    /// As `Final`, plus a snapshot of every intermediate matrix.
    Full,
}

/// One `record` per iteration `r` with its marks, its transition matrix (if
/// the algorithm has one at `r`) and optionally the matrix `Δ^r`.
pub fn write_trace(trace: &impl PivotTrace, verbosity: Verbosity) -> String {
    let mut out = String::new();
    writeln!(out, "algorithm {}", trace.algorithm()).unwrap();
    writeln!(out, "m {}", trace.partition().m()).unwrap();
    write_records(&mut out, trace, verbosity);
    out
}

fn write_records(out: &mut String, trace: &impl PivotTrace, verbosity: Verbosity) {
    let registry = trace.registry();
    for (r, matrix) in trace.matrices().iter().enumerate() {
        writeln!(out, "record r={r}").unwrap();
        for (at, kind) in registry.on_diagonal(r) {
            let value = &registry.get(at).expect("listed mark").value;
            writeln!(out, "mark {} {} {kind} {value}", at.row, at.col).unwrap();
        }
        if let Some(t) = trace.transitions().get(r) {
            out.push_str("transition\n");
            out.push_str(&entry_lines(&t.matrix));
        }
        if verbosity == Verbosity::Full {
            out.push_str("matrix\n");
            out.push_str(&entry_lines(matrix));
        }
        out.push_str("end\n");
    }
    if verbosity >= Verbosity::Final {
        out.push_str("final\n");
        out.push_str(&entry_lines(trace.final_matrix()));
        out.push_str("end\n");
    }
}

/// Trace of a block-by-block run: one section per block.
pub fn write_block_trace<T: PivotTrace>(runs: &[BlockRun<T>], verbosity: Verbosity) -> String {
    let mut out = String::new();
    if let Some(first) = runs.first() {
        writeln!(out, "algorithm block-{}", first.trace.algorithm()).unwrap();
        writeln!(out, "m {}", first.trace.partition().m()).unwrap();
    }
    for run in runs {
        writeln!(out, "block {}", run.k).unwrap();
        let cols: Vec<String> = run.pivot_columns.iter().map(ToString::to_string).collect();
        writeln!(out, "J{}_pivot_columns {}", run.k, cols.join(" ")).unwrap();
        write_records(&mut out, &run.trace, verbosity);
    }
    out
}

/// A line of a pivot file.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PivotLine {
    pub r: usize,
    pub j: usize,
    pub i: usize,
    pub value: Rational,
}

impl PivotLine {
    pub fn render(&self) -> String {
        format!("pivot {} {} {} {}", self.r, self.i, self.j, self.value)
    }
}

pub fn pivot_lines(trace: &impl PivotTrace) -> Vec<PivotLine> {
    let mut lines: Vec<PivotLine> = trace
        .primary_pivots()
        .into_iter()
        .map(|(p, value)| PivotLine { r: p.diagonal(), i: p.row, j: p.col, value })
        .collect();
    lines.sort();
    lines
}

/// `pivot r i j value` lines sorted by `(r, j)`.
pub fn write_pivots(lines: &[PivotLine]) -> String {
    let mut sorted = lines.to_vec();
    sorted.sort();
    sorted.iter().map(|l| l.render() + "\n").collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct PivotFileError {
    pub line: usize,
    pub message: String,
}

/// Parses a pivot file; blank lines and `#` comments are ignored.
pub fn parse_pivots(text: &str) -> Result<BTreeSet<PivotLine>, PivotFileError> {
    let mut out = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| PivotFileError { line: n + 1, message: message.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "pivot" {
            return Err(err("expected `pivot <r> <i> <j> <value>`"));
        }
        let num = |t: &str, what: &str| t.parse::<usize>().map_err(|_| err(&format!("bad {what} `{t}`")));
        let (r, i, j) = (num(toks[1], "r")?, num(toks[2], "row")?, num(toks[3], "column")?);
        let value = parse_rational(toks[4]).ok_or_else(|| err(&format!("bad value `{}`", toks[4])))?;
        if i == 0 || j <= i || j - i != r {
            return Err(err("position does not lie on diagonal r"));
        }
        if !out.insert(PivotLine { r, i, j, value }) {
            return Err(err("duplicate pivot"));
        }
    }
    Ok(out)
}

/// `cancel page=r pivot=i,j pair=a,b` lines.
pub fn write_schedule(schedule: &[ScheduleEntry]) -> String {
    schedule
        .iter()
        .map(|e| {
            let (a, b) = e.pair();
            format!("cancel page={} pivot={},{} pair={a},{b}\n", e.page, e.pivot.row, e.pivot.col)
        })
        .collect()
}

/// A reduction step as a CMX document over its surviving labels.
///
/// CMX needs labels `1..=n`, so entries use positions among the surviving
/// labels; a `# labels` comment maps them back to the original ones.
pub fn write_reduction_step(step: &ReductionStep, chain: &[usize], b: usize) -> String {
    let mut out = format!("CMX 1\n# reduction step r={}\n", step.r);
    for p in &step.removed {
        writeln!(out, "# removed {},{} diagonal={}", p.pivot.row, p.pivot.col, p.diagonal).unwrap();
    }
    let labels: Vec<String> = step.labels.iter().map(ToString::to_string).collect();
    writeln!(out, "# labels {}", labels.join(" ")).unwrap();
    writeln!(out, "m {}\nb {b}", step.labels.len()).unwrap();
    for (t, k) in chain.iter().enumerate() {
        writeln!(out, "index {} {k}", t + 1).unwrap();
    }
    out.push_str(&entry_lines(&step.matrix));
    out
}
