//! Executable statements of the invariants each algorithm promises.
//!
//! Every function returns [`Check`] records instead of panicking so that the
//! same suites serve the test harness and the command-line `--verify` report.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::block_seq::BlockRun;
use crate::marks::MarkKind;
use crate::matrix::{is_integral, is_unit, QMatrix};
use crate::model::{ConnectionMatrix, Partition, Position};
use crate::oracles::{linalg, pivot_rank_oracle};
use crate::row_cancel::{RCTrace, ReductionTrace};
use crate::trace::{Algorithm, PivotTrace, SweepTrace};
use crate::tu::{betti_of_labels, betti_over_q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, failure: Option<String>) -> Self {
        let passed = failure.is_none();
        Check { name: name.into(), passed, detail: failure.unwrap_or_default() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{verdict} {}", self.name)
        } else {
            write!(f, "{verdict} {}: {}", self.name, self.detail)
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// First index `j` whose column and row are both nonzero.
pub fn complementarity_violation(a: &QMatrix) -> Option<usize> {
    (1..=a.rows()).find(|&j| !a.col_is_zero(j) && !a.row_is_zero(j))
}

pub fn complementarity(name: &str, a: &QMatrix) -> Check {
    Check::new(name, complementarity_violation(a).map(|j| format!("column {j} and row {j} are both nonzero")))
}

/// First nonzero of `a` outside the allowable pattern.
pub fn pattern_violation(partition: &Partition, a: &QMatrix) -> Option<Position> {
    a.nonzeros().map(|(i, j, _)| Position::new(i, j)).find(|p| !partition.allows(p.row, p.col))
}

/// First index `r` at which the recorded matrix differs from an independent
/// recomputation. Accumulated variants are checked against
/// `(P^{r-1})^{-1} Δ^0 P^{r-1}`, incremental ones against `(T^r)^{-1} Δ^r T^r`.
pub fn similarity_violation(trace: &SweepTrace) -> Option<usize> {
    let m = trace.matrices.len() - 1;
    match trace.algorithm {
        Algorithm::Integer | Algorithm::Accumulated => (1..=m).find(|&r| {
            let p = &trace.transitions[r - 1].matrix;
            linalg::conjugate(p, &trace.matrices[0]).as_ref() != Some(&trace.matrices[r])
        }),
        Algorithm::Incremental => (0..m).find(|&r| {
            let t = &trace.transitions[r].matrix;
            linalg::conjugate(t, &trace.matrices[r]).as_ref() != Some(&trace.matrices[r + 1])
        }),
        _ => None,
    }
}

/// Entry strictly below diagonal `r` of `a` that is neither a primary pivot
/// marked before `r` nor above one.
fn below_diagonal_violation(trace: &impl PivotTrace, a: &QMatrix, r: usize) -> Option<Position> {
    let reg = trace.registry();
    a.nonzeros().map(|(i, j, _)| Position::new(i, j)).find(|p| {
        if p.diagonal() >= r {
            return false;
        }
        match reg.primary_in_column(p.col) {
            Some(piv) => {
                let early = reg.get(piv).is_some_and(|m| m.diagonal < r);
                !(early && p.row <= piv.row)
            }
            None => true,
        }
    })
}

/// Checks for the diagonal sweeps over ℤ or ℚ.
pub fn sweep_checks(input: &ConnectionMatrix, trace: &SweepTrace) -> Vec<Check> {
    let partition = input.partition();
    let mut out = Vec::new();
    let m = trace.matrices.len();
    out.push(Check::new(
        "pattern",
        trace
            .matrices
            .iter()
            .enumerate()
            .find_map(|(r, a)| pattern_violation(partition, a).map(|p| format!("Δ^{r} has a nonzero at {p}"))),
    ));
    if trace.algorithm != Algorithm::RevisedOneBlock {
        out.push(Check::new(
            "zero_below_primary",
            (1..m).find_map(|r| {
                below_diagonal_violation(trace, &trace.matrices[r], r)
                    .map(|p| format!("Δ^{r} has a stray nonzero at {p}"))
            }),
        ));
        out.push(Check::new(
            "similarity",
            similarity_violation(trace).map(|r| format!("recomputed Δ^{r} differs from the trace")),
        ));
    }
    out.push(Check::new(
        "primary_nonzero",
        trace.primary_pivots().into_iter().find(|(_, v)| v.is_zero()).map(|(p, _)| format!("pivot {p} is zero")),
    ));
    out.push(Check::new(
        "one_primary_per_row",
        (1..=input.m())
            .find(|&i| trace.registry.primaries_in_row(i).len() > 1)
            .map(|i| format!("row {i} has several primary pivots")),
    ));
    out.push(complementarity("complementarity", trace.final_matrix()));
    out.push(oracle_check(input, trace));
    out
}

/// On totally unimodular inputs each `σ^r_j` is an integer combination with leading coefficient 1.
pub fn leading_coefficient_check(trace: &SweepTrace) -> Check {
    let bases = trace.all_bases();
    let failure = bases.iter().enumerate().find_map(|(r, p)| {
        if let Some((i, j, _)) = p.nonzeros().find(|(_, _, v)| !is_integral(v)) {
            return Some(format!("σ^{}_{j} has a fractional coefficient in row {i}", r + 1));
        }
        (1..=p.cols())
            .find(|&j| !p.get(j, j).is_one())
            .map(|j| format!("σ^{}_{j} has leading coefficient {}", r + 1, p.get(j, j)))
    });
    Check::new("leading_coefficient_one", failure)
}

pub fn unit_pivots_check(trace: &impl PivotTrace) -> Check {
    Check::new(
        "unit_pivots",
        trace.primary_pivots().into_iter().find(|(_, v)| !is_unit(v)).map(|(p, v)| format!("pivot {p} has value {v}")),
    )
}

pub fn oracle_check(input: &ConnectionMatrix, trace: &impl PivotTrace) -> Check {
    let predicted = pivot_rank_oracle(input);
    let found: BTreeSet<Position> = trace.primary_pivots().into_iter().map(|(p, _)| p).collect();
    let failure = (predicted != found).then(|| {
        let missing: Vec<String> = predicted.difference(&found).map(ToString::to_string).collect();
        let extra: Vec<String> = found.difference(&predicted).map(ToString::to_string).collect();
        format!("rank oracle disagrees; missing [{}], unexpected [{}]", missing.join(" "), extra.join(" "))
    });
    Check::new("rank_oracle", failure)
}

/// Support and shape of the row-cancellation transition matrices.
pub fn rc_transition_check(trace: &RCTrace) -> Check {
    let failure = trace.transitions.iter().enumerate().find_map(|(r, t)| {
        let a = &t.matrix;
        if !a.is_upper_triangular() || (1..=a.rows()).any(|i| !a.get(i, i).is_one()) {
            return Some(format!("T̃^{r} is not unit upper triangular"));
        }
        let rows: BTreeSet<usize> = trace.registry.on_diagonal(r).into_iter().map(|(p, _)| p.col).collect();
        a.nonzeros()
            .find(|&(i, j, _)| i != j && !rows.contains(&i))
            .map(|(i, j, _)| format!("T̃^{r} has an off-diagonal entry at ({i},{j}) outside the pivot rows"))
    });
    Check::new("rc_transition_shape", failure)
}

/// The structural statements about `Δ̃^0..Δ̃^{m-1}`, one check per item.
pub fn row_cancellation_checks(input: &ConnectionMatrix, trace: &RCTrace) -> Vec<Check> {
    let partition = input.partition();
    let mats = &trace.matrices;
    let last = mats.len() - 1;
    let reg = &trace.registry;
    let primaries: Vec<(Position, usize)> = reg.primaries().into_iter().map(|(p, m)| (p, m.diagonal)).collect();
    let mut out = Vec::new();

    out.push(Check::new(
        "rc_only_primary_marks",
        reg.iter().find(|(_, m)| m.kind != MarkKind::Primary).map(|(p, _)| format!("{p} is not primary")),
    ));
    out.push(Check::new(
        "rc_i_pattern",
        mats.iter()
            .enumerate()
            .find_map(|(r, a)| pattern_violation(partition, a).map(|p| format!("Δ̃^{r} has a nonzero at {p}"))),
    ));
    out.push(Check::new(
        "rc_ii_below_diagonal",
        mats.iter().enumerate().find_map(|(r, a)| {
            below_diagonal_violation(trace, a, r).map(|p| format!("Δ̃^{r} has a stray nonzero at {p}"))
        }),
    ));
    out.push(Check::new(
        "rc_iii_pivot_rows",
        (0..=last).find_map(|r| {
            let marked: Vec<Position> = primaries.iter().filter(|(_, d)| *d <= r).map(|(p, _)| *p).collect();
            marked.iter().find_map(|p| {
                marked
                    .iter()
                    .find(|q| q.row == p.col)
                    .map(|q| format!("row {} holds pivot {q} though column {} holds pivot {p}", p.col, p.col))
            })
        }),
    ));
    let right_of = |a: &QMatrix, p: &Position| ((p.col + 1)..=a.cols()).find(|&l| !a.get(p.row, l).is_zero());
    out.push(Check::new(
        "rc_iv_row_cleared",
        primaries.iter().find_map(|(p, r)| {
            let s = r + 1;
            (s <= last)
                .then(|| right_of(&mats[s], p))
                .flatten()
                .map(|l| format!("Δ̃^{s}_{{{},{l}}} is nonzero after pivot {p}", p.row))
        }),
    ));
    out.push(Check::new(
        "rc_v_pivot_column_row_zero",
        primaries.iter().find_map(|(p, r)| {
            (r + 1..=last)
                .find(|&s| !mats[s].row_is_zero(p.col))
                .map(|s| format!("row {} of Δ̃^{s} is nonzero after pivot {p}", p.col))
        }),
    ));
    out.push(Check::new(
        "rc_vi_pivot_row_column",
        primaries
            .iter()
            .find(|(p, _)| reg.primary_in_column(p.row).is_some())
            .map(|(p, _)| format!("column {} holds a pivot although {p} is a pivot", p.row)),
    ));
    out.push(Check::new(
        "rc_vii_row_stays_cleared",
        primaries.iter().find_map(|(p, r)| {
            (r + 1..=last)
                .find(|&s| right_of(&mats[s], p).is_some())
                .map(|s| format!("Δ̃^{s} refills row {} right of pivot {p}", p.row))
        }),
    ));
    out.push(Check::new(
        "rc_viii_one_pivot_per_row",
        (1..=input.m()).find(|&i| reg.primaries_in_row(i).len() > 1).map(|i| format!("row {i} has several pivots")),
    ));
    out.push(rc_transition_check(trace));
    out.push(complementarity("rc_complementarity", trace.final_matrix()));
    out.push(oracle_check(input, trace));
    out
}

/// Homology is unchanged by every reduction step; on TU inputs the last step is null.
pub fn reduction_checks(input: &ConnectionMatrix, reduction: &ReductionTrace, expect_null: bool) -> Vec<Check> {
    let expected = betti_over_q(input);
    let partition = input.partition();
    let mut out = vec![Check::new(
        "reduction_betti",
        reduction.steps.iter().find_map(|s| {
            let got = betti_of_labels(&s.matrix, &s.chain(partition), input.b());
            (got != expected).then(|| format!("step {} has Betti numbers {got:?} instead of {expected:?}", s.r))
        }),
    )];
    if expect_null {
        let last = reduction.last();
        out.push(Check::new(
            "reduction_final_null",
            (!last.matrix.is_zero()).then(|| format!("Δ̂^{} keeps {} nonzeros", last.r, last.matrix.nonzeros().count())),
        ));
    }
    out
}

/// Compares a full run with its block-by-block counterpart.
pub fn uncoupling_check<T: PivotTrace>(
    input: &ConnectionMatrix,
    full: &impl PivotTrace,
    runs: &[BlockRun<T>],
) -> Check {
    let partition = input.partition();
    let full_final = full.final_matrix();
    for run in runs {
        let rows = partition.subset(run.k - 1);
        let cols = partition.subset(run.k);
        if full_final.submatrix(&rows, &cols) != run.trace.final_matrix().submatrix(&rows, &cols) {
            return Check::new("uncoupling", Some(format!("final block {} differs from the full run", run.k)));
        }
    }
    let full_marks: BTreeSet<(Position, MarkKind)> = full.registry().iter().map(|(p, m)| (p, m.kind)).collect();
    let block_marks: BTreeSet<(Position, MarkKind)> =
        runs.iter().flat_map(|r| r.trace.registry().iter().map(|(p, m)| (p, m.kind))).collect();
    let failure = (full_marks != block_marks).then(|| {
        let a: Vec<String> = full_marks.difference(&block_marks).map(|(p, k)| format!("{p} {k}")).collect();
        let b: Vec<String> = block_marks.difference(&full_marks).map(|(p, k)| format!("{p} {k}")).collect();
        format!("marks differ; full only [{}], blocks only [{}]", a.join(", "), b.join(", "))
    });
    Check::new("uncoupling", failure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::row_cancel::{reduce_complex, row_cancellation};
    use crate::sweep_f::sweep_incremental;
    use crate::sweep_z::sweep_over_z;

    #[test]
    fn fixtures_pass_their_suites() {
        for a in [fixtures::zero(), fixtures::sphere(), fixtures::tucb(), fixtures::cb()] {
            for t in [sweep_over_z(&a).unwrap(), sweep_incremental(&a).unwrap()] {
                let checks = sweep_checks(&a, &t);
                assert!(all_passed(&checks), "{checks:?}");
            }
            let rc = row_cancellation(&a).unwrap();
            let checks = row_cancellation_checks(&a, &rc);
            assert!(all_passed(&checks), "{checks:?}");
            assert!(all_passed(&reduction_checks(&a, &reduce_complex(&rc), false)));
        }
    }

    #[test]
    fn complementarity_detects_overlap() {
        let a = QMatrix::from_i64_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(complementarity_violation(&a), Some(2));
        assert!(!complementarity("x", &a).passed);
    }

    #[test]
    fn leading_coefficient_on_cb_fails_over_z() {
        let t = sweep_over_z(&fixtures::cb()).unwrap();
        assert!(!leading_coefficient_check(&t).passed);
        let t = sweep_over_z(&fixtures::tucb()).unwrap();
        assert!(leading_coefficient_check(&t).passed);
    }
}
