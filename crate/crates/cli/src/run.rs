//! The `run` subcommand.

use std::fmt::Write as _;
use std::path::Path;

use cmsweep::block_seq::{block_sequential_sweep, revised_one_block, BlockRun};
use cmsweep::cmx::serialize_cmx;
use cmsweep::export::{
    pivot_lines, write_block_trace, write_pivots, write_reduction_step, write_schedule, write_trace, PivotLine,
    Verbosity,
};
use cmsweep::invariants::{
    all_passed, leading_coefficient_check, reduction_checks, row_cancellation_checks, sweep_checks, uncoupling_check,
    unit_pivots_check, Check,
};
use cmsweep::row_cancel::{
    cancellation_schedule, reduce_complex, row_cancellation, smale_cancellation_sweep, RCTrace, ReductionTrace,
    ScheduleEntry,
};
use cmsweep::sweep_f::{sweep_accumulated, sweep_incremental};
use cmsweep::sweep_z::sweep_over_z;
use cmsweep::tu::{is_totally_unimodular, TuError};
use cmsweep::{ConnectionMatrix, PivotTrace, Position, QMatrix, SweepTrace};

use crate::failure::{load_cmx, write, Failure};
use crate::{AlgorithmArg, RunArgs, VerbosityArg};

/// Everything a run produces before it is written out.
struct Outcome {
    trace: String,
    pivots: Vec<PivotLine>,
    final_matrix: QMatrix,
    schedule: Vec<ScheduleEntry>,
    reduction: Option<ReductionTrace>,
    checks: Vec<Check>,
}

/// Whether the input is totally unimodular, if the exhaustive check is affordable.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tu {
    Yes,
    No,
    Unknown,
}

impl Tu {
    fn of(input: &ConnectionMatrix) -> Self {
        match is_totally_unimodular(input) {
            Ok(true) => Tu::Yes,
            Ok(false) => Tu::No,
            Err(TuError::TooLarge { .. }) => Tu::Unknown,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Tu::Yes => "totally unimodular",
            Tu::No => "not totally unimodular",
            Tu::Unknown => "total unimodularity unknown (above the exhaustive guard)",
        }
    }
}

pub fn run(args: &RunArgs) -> Result<(), Failure> {
    let input = load_cmx(&args.input)?;
    let reducible = matches!(args.algorithm, AlgorithmArg::Rowcancel | AlgorithmArg::Smale);
    if args.reduction && !reducible {
        return Err(Failure::Precondition("--reduction needs --algorithm rowcancel or smale".into()));
    }
    let verbosity = match args.verbosity {
        VerbosityArg::Pivots => Verbosity::Pivots,
        VerbosityArg::Final => Verbosity::Final,
        VerbosityArg::Full => Verbosity::Full,
    };
    let tu = if args.verify { Tu::of(&input) } else { Tu::Unknown };
    let outcome = execute(args, &input, verbosity, tu)?;

    let out = &args.out;
    std::fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    write(&out.join("trace.txt"), &outcome.trace)?;
    write(&out.join("pivots.txt"), &write_pivots(&outcome.pivots))?;
    if verbosity >= Verbosity::Final {
        let final_cmx = ConnectionMatrix::from_matrix(input.partition().clone(), outcome.final_matrix.clone())
            .map_err(|e| Failure::Verification(format!("final matrix is not a connection matrix: {e}")))?;
        write(&out.join("final.cmx"), &serialize_cmx(&final_cmx))?;
    }
    if args.schedule {
        write(&out.join("schedule.txt"), &write_schedule(&outcome.schedule))?;
    }
    if let Some(reduction) = &outcome.reduction {
        write_reduction(out, &input, reduction)?;
    }
    if args.verify {
        let mut report = format!("# {}\n", tu.describe());
        for check in &outcome.checks {
            writeln!(report, "{check}").unwrap();
        }
        write(&out.join("verify.txt"), &report)?;
        if !all_passed(&outcome.checks) {
            let failed: Vec<&str> = outcome.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            return Err(Failure::Verification(failed.join(", ")));
        }
    }
    Ok(())
}

fn write_reduction(out: &Path, input: &ConnectionMatrix, reduction: &ReductionTrace) -> Result<(), Failure> {
    let dir = out.join("reduction");
    std::fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    for step in &reduction.steps {
        let text = write_reduction_step(step, &step.chain(input.partition()), input.b());
        write(&dir.join(format!("step{}.cmx", step.r)), &text)?;
    }
    Ok(())
}

fn execute(args: &RunArgs, input: &ConnectionMatrix, verbosity: Verbosity, tu: Tu) -> Result<Outcome, Failure> {
    let verify = args.verify;
    let outcome = match args.algorithm {
        AlgorithmArg::Z | AlgorithmArg::Accumulated | AlgorithmArg::Incremental => {
            let trace = match args.algorithm {
                AlgorithmArg::Z => sweep_over_z(input)?,
                AlgorithmArg::Accumulated => sweep_accumulated(input)?,
                _ => sweep_incremental(input)?,
            };
            let mut checks = Vec::new();
            if verify {
                checks = sweep_checks(input, &trace);
                if tu == Tu::Yes {
                    checks.push(unit_pivots_check(&trace));
                    if args.algorithm == AlgorithmArg::Z {
                        checks.push(leading_coefficient_check(&trace));
                    }
                }
            }
            single(&trace, write_trace(&trace, verbosity), checks)
        }
        AlgorithmArg::Revised1 => {
            let trace = revised_one_block(input)?;
            let mut checks = Vec::new();
            if verify {
                checks = sweep_checks(input, &trace);
                checks.push(revised_agreement(input, &trace)?);
            }
            single(&trace, write_trace(&trace, verbosity), checks)
        }
        AlgorithmArg::Block => block(input, verbosity, verify)?,
        AlgorithmArg::Rowcancel | AlgorithmArg::Smale => {
            let trace = if args.algorithm == AlgorithmArg::Smale {
                smale_cancellation_sweep(input)?
            } else {
                row_cancellation(input)?
            };
            // Surface matrices are totally unimodular, so smale always expects a null reduced complex.
            let expect_null = args.algorithm == AlgorithmArg::Smale || tu == Tu::Yes;
            let reduction = (args.reduction || verify).then(|| reduce_complex(&trace));
            let mut checks = Vec::new();
            if verify {
                checks = row_cancellation_checks(input, &trace);
                if expect_null {
                    checks.push(unit_pivots_check(&trace));
                }
                checks.extend(reduction_checks(
                    input,
                    reduction.as_ref().expect("computed when verifying"),
                    expect_null,
                ));
            }
            let mut outcome = single::<RCTrace>(&trace, write_trace(&trace, verbosity), checks);
            outcome.reduction = if args.reduction { reduction } else { None };
            outcome
        }
    };
    Ok(outcome)
}

fn single<T: PivotTrace>(trace: &T, text: String, checks: Vec<Check>) -> Outcome {
    Outcome {
        trace: text,
        pivots: pivot_lines(trace),
        final_matrix: trace.final_matrix().clone(),
        schedule: cancellation_schedule(trace),
        reduction: None,
        checks,
    }
}

fn block(input: &ConnectionMatrix, verbosity: Verbosity, verify: bool) -> Result<Outcome, Failure> {
    let runs = block_sequential_sweep(input)?;
    let mut pivots: Vec<PivotLine> = runs.iter().flat_map(|r| pivot_lines(&r.trace)).collect();
    pivots.sort();
    let mut schedule: Vec<ScheduleEntry> = runs.iter().flat_map(|r| cancellation_schedule(&r.trace)).collect();
    schedule.sort_by_key(|e| (e.page, e.pivot.col));
    let mut checks = Vec::new();
    if verify {
        for run in &runs {
            for mut check in sweep_checks(&run.input, &run.trace) {
                check.name = format!("block{}_{}", run.k, check.name);
                checks.push(check);
            }
        }
        checks.push(uncoupling_check(input, &sweep_incremental(input)?, &runs));
    }
    Ok(Outcome {
        trace: write_block_trace(&runs, verbosity),
        pivots,
        final_matrix: assemble(input, &runs),
        schedule,
        reduction: None,
        checks,
    })
}

/// Puts each run's final block `J_{k-1} × J_k` into one matrix.
fn assemble(input: &ConnectionMatrix, runs: &[BlockRun<SweepTrace>]) -> QMatrix {
    let partition = input.partition();
    let mut a = QMatrix::zeros(input.m(), input.m());
    for run in runs {
        for (i, j, v) in run.trace.final_matrix().nonzeros() {
            if partition.chain_of(j) == run.k {
                a[(i, j)] = v.clone();
            }
        }
    }
    a
}

/// The revised sweep must finish where the incremental sweep does, with the same pivots.
fn revised_agreement(input: &ConnectionMatrix, trace: &SweepTrace) -> Result<Check, Failure> {
    let inc = sweep_incremental(input)?;
    let positions = |t: &SweepTrace| -> Vec<Position> { t.primary_pivots().into_iter().map(|(p, _)| p).collect() };
    let failure = if inc.final_matrix() != trace.final_matrix() {
        Some("final matrix differs from the incremental sweep".to_string())
    } else if positions(&inc) != positions(trace) {
        Some("primary pivots differ from the incremental sweep".to_string())
    } else {
        None
    };
    Ok(Check::new("revised_matches_incremental", failure))
}
