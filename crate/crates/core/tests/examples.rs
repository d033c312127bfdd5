//! The documented fixture behaviour, end to end through the public API.

use std::collections::BTreeSet;

use cmsweep::block_seq::{block_sequential_sweep, revised_one_block};
use cmsweep::cmx::{parse_cmx, serialize_cmx, CmxError};
use cmsweep::fixtures;
use cmsweep::matrix::{q, qf};
use cmsweep::model::{allowable_pattern, validate, Partition};
use cmsweep::oracles::linalg::inverse;
use cmsweep::oracles::{ilp_brute_force, pivot_rank_oracle};
use cmsweep::row_cancel::{
    block_sequential_row_cancellation, cancellation_schedule, rc_transition, reduce_complex, row_cancellation,
    smale_cancellation_sweep,
};
use cmsweep::sweep_f::{invert_transition, sweep_accumulated, sweep_incremental};
use cmsweep::sweep_z::{marks_on_diagonal, solve_min_leading, sweep_over_z, KernelProblem};
use cmsweep::trace::StepDetail;
use cmsweep::tu::{
    betti_over_q, generate_surface_matrix, is_surface_connection_matrix, is_totally_unimodular, SurfaceSpec,
};
use cmsweep::{ConnectionMatrix, MarkKind, PivotTrace, Position, QMatrix, SweepError};
use num_bigint::BigInt;

fn pos(i: usize, j: usize) -> Position {
    Position::new(i, j)
}

fn entries(a: &QMatrix) -> Vec<(usize, usize, cmsweep::Rational)> {
    a.nonzeros().map(|(i, j, v)| (i, j, v.clone())).collect()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn cmx_round_trips() {
    for a in [fixtures::zero(), fixtures::sphere(), fixtures::tucb(), fixtures::cb()] {
        assert_eq!(parse_cmx(&serialize_cmx(&a)).unwrap(), a);
    }
    assert_eq!(fixtures::sphere().nnz(), 2);
    assert!(!serialize_cmx(&fixtures::zero()).contains("entry"));
    let cb = serialize_cmx(&fixtures::cb());
    let lines: Vec<&str> = cb.lines().filter(|l| l.starts_with("entry")).collect();
    assert_eq!(lines, ["entry 1 3 2", "entry 1 4 3", "entry 2 3 -2", "entry 2 4 -3"]);
    let diagonal = "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\nentry 3 3 1\n";
    assert!(matches!(parse_cmx(diagonal), Err(CmxError::NotStrictlyUpper { .. })));
}

#[test]
fn patterns_and_validation() {
    assert_eq!(allowable_pattern(&fixtures::fig3_left_partition()).len(), 29);
    assert_eq!(allowable_pattern(&fixtures::fig3_right_partition()).len(), 17);
    let zero: BTreeSet<Position> = allowable_pattern(fixtures::zero().partition());
    assert_eq!(zero, [pos(1, 2), pos(2, 3)].into());

    let draft = fixtures::sphere().to_draft();
    assert!(validate(&draft).is_empty());
    assert!(validate(&draft.clone().with_entry(3, 4, q(1))).is_empty());
    assert_eq!(validate(&draft.with_entry(1, 4, q(1))).len(), 1);
}

#[test]
fn integer_sweep_fixtures() {
    let z = sweep_over_z(&fixtures::zero()).unwrap();
    assert!(z.registry.is_empty());
    assert!(z.matrices.iter().all(QMatrix::is_zero));
    assert!(z.transitions.iter().all(|t| t.matrix.is_identity()));

    let sphere = fixtures::sphere();
    let z = sweep_over_z(&sphere).unwrap();
    assert_eq!(z.primary_pivots(), vec![(pos(2, 3), q(-1))]);
    assert_eq!(z.matrices[4], *sphere.matrix());
    assert_eq!(marks_on_diagonal(&z, 1).unwrap(), vec![(pos(2, 3), MarkKind::Primary)]);
    assert!(marks_on_diagonal(&z, 2).unwrap().is_empty());

    let z = sweep_over_z(&fixtures::cb()).unwrap();
    assert_eq!(z.primary_pivots(), vec![(pos(2, 3), q(-2))]);
    assert_eq!(marks_on_diagonal(&z, 2).unwrap(), vec![(pos(2, 4), MarkKind::ChangeOfBasis)]);
    let StepDetail::Integer { x, .. } = &z.steps[0].detail else { panic!("integer step") };
    assert_eq!(x, &ints(&[-3, 2]));
    assert_eq!(entries(z.final_matrix()), vec![(1, 3, q(2)), (2, 3, q(-2))]);
}

#[test]
fn kernel_problems() {
    let cases: [(&[&[i64]], &[i64]); 3] =
        [(&[&[-2, -3]], &[-3, 2]), (&[&[1, -1]], &[1, 1]), (&[&[1, 0, 2], &[0, 1, -1]], &[-2, 1, 1])];
    for (rows, expected) in cases {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let problem = KernelProblem::from_i64_rows(&rows);
        assert_eq!(solve_min_leading(&problem).unwrap(), ints(expected));
        assert_eq!(ilp_brute_force(&problem, 10).unwrap().min, BigInt::from(*expected.last().unwrap()));
    }
    let free = KernelProblem::from_i64_rows(&[vec![0, 0]]);
    let sol = ilp_brute_force(&free, 10).unwrap();
    assert_eq!(sol.witness, ints(&[0, 1]));
}

#[test]
fn rational_sweep_fixtures() {
    let acc = sweep_accumulated(&fixtures::zero()).unwrap();
    assert!(acc.transitions.iter().all(|t| t.matrix.is_identity()));

    let acc = sweep_accumulated(&fixtures::cb()).unwrap();
    assert_eq!(entries(acc.final_matrix()), vec![(1, 3, q(2)), (2, 3, q(-2))]);

    let acc = sweep_accumulated(&fixtures::tucb()).unwrap();
    assert_eq!(acc.primary_pivots(), vec![(pos(2, 3), q(-1))]);
    assert_eq!(acc.steps[0].at, pos(2, 4));
    assert_eq!(entries(acc.final_matrix()), vec![(1, 3, q(1)), (2, 3, q(-1))]);

    let inc = sweep_incremental(&fixtures::sphere()).unwrap();
    assert!(inc.transitions.iter().all(|t| t.matrix.is_identity()));

    let inc = sweep_incremental(&fixtures::cb()).unwrap();
    assert_eq!(inc.transitions[2].matrix.get(3, 4), &qf(-3, 2));
    let sigma = inc.basis(3);
    assert_eq!(sigma.column(4), vec![q(0), q(0), qf(-3, 2), q(1)]);
    let inv = invert_transition(&inc.transitions[2]);
    assert_eq!(inv.get(3, 4), &qf(3, 2));
    assert!(inv.mul(&inc.transitions[2].matrix).is_identity());
}

#[test]
fn block_and_revised_fixtures() {
    let runs = block_sequential_sweep(&fixtures::sphere()).unwrap();
    let cols: Vec<BTreeSet<usize>> = runs.iter().map(|r| r.pivot_columns.clone()).collect();
    assert_eq!(cols, vec![[3].into(), BTreeSet::new()]);
    assert!(runs[1].input.matrix().is_zero());
    let runs = block_sequential_sweep(&fixtures::tucb()).unwrap();
    assert_eq!(runs[0].pivot_columns, [3].into());
    assert!(block_sequential_sweep(&fixtures::zero()).unwrap().iter().all(|r| r.pivot_columns.is_empty()));

    let rev = revised_one_block(&fixtures::tucb()).unwrap();
    assert_eq!(rev.primary_pivots(), vec![(pos(2, 3), q(-1))]);
    assert!(rev.final_matrix().col_is_zero(4));
    let rev = revised_one_block(&fixtures::cb()).unwrap();
    assert_eq!(rev.primary_pivots(), vec![(pos(2, 3), q(-2))]);
    assert_eq!(entries(rev.final_matrix()), vec![(1, 3, q(2)), (2, 3, q(-2))]);
    let rev = revised_one_block(&fixtures::zero()).unwrap();
    assert!(rev.primary_pivots().is_empty());
    assert!(rev.final_matrix().is_zero());
}

#[test]
fn row_cancellation_fixtures() {
    let sphere = fixtures::sphere();
    let rc = row_cancellation(&sphere).unwrap();
    assert_eq!(rc.primary_pivots(), vec![(pos(2, 3), q(-1))]);
    assert!(rc.transitions[1].matrix.is_identity());
    assert_eq!(rc.final_matrix(), sphere.matrix());
    assert_eq!(smale_cancellation_sweep(&sphere).unwrap().matrices, rc.matrices);

    let rc = row_cancellation(&fixtures::cb()).unwrap();
    assert_eq!(rc.primary_pivots(), vec![(pos(2, 3), q(-2))]);
    let mut expected = QMatrix::identity(4);
    expected[(3, 4)] = qf(-3, 2);
    assert_eq!(rc.transitions[1].matrix, expected);
    assert_eq!(entries(&rc.matrices[2]), vec![(1, 3, q(2)), (2, 3, q(-2))]);
    let block = rc_transition(&fixtures::cb().matrix().clone(), 1, &[pos(2, 3)]).unwrap();
    assert_eq!(block.matrix, expected);

    let rc = row_cancellation(&fixtures::zero()).unwrap();
    assert!(rc.primary_pivots().is_empty() && rc.matrices.iter().all(QMatrix::is_zero));
    let delta = fixtures::cb().matrix().clone();
    assert!(rc_transition(&delta, 1, &[]).unwrap().matrix.is_identity());
    assert!(rc_transition(&delta, 3, &[pos(1, 4)]).unwrap().matrix.is_identity());

    let runs = block_sequential_row_cancellation(&sphere).unwrap();
    assert_eq!(runs[0].pivot_columns, [3].into());
    assert!(runs[1].pivot_columns.is_empty());

    let schedule: Vec<(usize, Position)> = cancellation_schedule(&row_cancellation(&fixtures::tucb()).unwrap())
        .iter()
        .map(|e| (e.page, e.pivot))
        .collect();
    assert_eq!(schedule, vec![(1, pos(2, 3))]);
    assert!(cancellation_schedule(&row_cancellation(&fixtures::zero()).unwrap()).is_empty());
}

/// Two pivots on one diagonal, with the later pivot's column reaching into the earlier pivot's row.
#[test]
fn two_pivot_transition_is_the_unique_solution() {
    let partition = Partition::grouped(&[3, 3]).unwrap();
    let values = [(1, 4, 1), (1, 5, 3), (1, 6, -1), (2, 5, 2), (2, 6, 5)];
    let a = ConnectionMatrix::from_entries(partition, values.iter().map(|&(i, j, v)| (i, j, q(v)))).unwrap();
    let delta = a.matrix().clone();
    let pivots = [pos(1, 4), pos(2, 5)];
    let t = rc_transition(&delta, 3, &pivots).unwrap();
    assert_eq!(t.factors.len(), 2);

    // Column by column, the free entries of rows 4 and 5 solve M x = -Δ_{pivot rows, l}.
    let m = delta.rows();
    let mut solved = QMatrix::identity(m);
    for l in 1..=m {
        let active: Vec<Position> = pivots.iter().copied().filter(|p| p.col < l).collect();
        if active.is_empty() {
            continue;
        }
        let n = active.len();
        let mut system = QMatrix::zeros(n, n);
        for (t_idx, pt) in active.iter().enumerate() {
            for (s_idx, ps) in active.iter().enumerate() {
                system[(t_idx + 1, s_idx + 1)] = delta.get(pt.row, ps.col).clone();
            }
        }
        let inv = inverse(&system).expect("pivot submatrix is invertible");
        for (s_idx, ps) in active.iter().enumerate() {
            let x: cmsweep::Rational = active
                .iter()
                .enumerate()
                .map(|(t_idx, pt)| inv.get(s_idx + 1, t_idx + 1) * -delta.get(pt.row, l))
                .sum();
            solved[(ps.col, l)] = x;
        }
    }
    assert_eq!(t.matrix, solved);

    let next = invert_transition(&t).mul(&delta).mul(&t.matrix);
    for p in pivots {
        assert!((p.col + 1..=m).all(|l| next.get(p.row, l) == &q(0)), "row {} not cleared", p.row);
    }
}

#[test]
fn reductions() {
    let sphere = fixtures::sphere();
    let red = reduce_complex(&row_cancellation(&sphere).unwrap());
    let last = red.last();
    assert_eq!(last.labels, vec![1, 4]);
    assert!(last.matrix.is_zero() && last.matrix.rows() == 2);
    let removed: Vec<Position> = red.steps.iter().flat_map(|s| s.removed.iter().map(|p| p.pivot)).collect();
    assert_eq!(removed, vec![pos(2, 3)]);

    let zero = fixtures::zero();
    let red = reduce_complex(&row_cancellation(&zero).unwrap());
    assert!(red.steps.iter().all(|s| s.removed.is_empty() && s.matrix == *zero.matrix()));

    let tucb = fixtures::tucb();
    let red = reduce_complex(&row_cancellation(&tucb).unwrap());
    assert_eq!(red.last().labels, vec![1, 4]);
    assert!(red.last().matrix.is_zero());
    assert_eq!(betti_over_q(&tucb), vec![1, 1]);
}

#[test]
fn smale_preconditions() {
    match smale_cancellation_sweep(&fixtures::cb()) {
        Err(SweepError::NotSurface(why)) => assert!(why.to_string().contains("property (i)")),
        other => panic!("unexpected {other:?}"),
    }
    let t = smale_cancellation_sweep(&fixtures::tucb_surface()).unwrap();
    assert_eq!(t.primary_pivots(), vec![(pos(2, 3), q(-1))]);
}

#[test]
fn total_unimodularity_and_surfaces() {
    assert!(is_totally_unimodular(&fixtures::tucb()).unwrap());
    assert!(!is_totally_unimodular(&fixtures::cb()).unwrap());
    assert!(is_totally_unimodular(&fixtures::zero()).unwrap());
    assert!(is_surface_connection_matrix(&fixtures::sphere()).unwrap().is_accepted());
    assert_eq!(betti_over_q(&fixtures::sphere()), vec![1, 0, 1]);
    assert_eq!(betti_over_q(&fixtures::zero()), vec![1, 1, 1]);

    let minimal = generate_surface_matrix(&SurfaceSpec::new(3, 1, 0, 1));
    assert_eq!(minimal.m(), 2);
    assert!(minimal.matrix().is_zero());
    let small = generate_surface_matrix(&SurfaceSpec::new(3, 2, 1, 1));
    assert!(is_surface_connection_matrix(&small).unwrap().is_accepted());
    assert_eq!(small.nnz(), 2);
    assert_eq!(pivot_rank_oracle(&small).len(), 1);
    for seed in 0..10 {
        let a = generate_surface_matrix(&SurfaceSpec::new(seed, 3, 6, 4));
        assert!(is_totally_unimodular(&a).unwrap());
    }
}

#[test]
fn oracle_fixtures() {
    assert_eq!(pivot_rank_oracle(&fixtures::sphere()), [pos(2, 3)].into());
    assert!(pivot_rank_oracle(&fixtures::zero()).is_empty());
    assert_eq!(pivot_rank_oracle(&fixtures::cb()), [pos(2, 3)].into());
}
