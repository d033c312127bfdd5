//! Subcommands other than `run`.

use std::collections::BTreeSet;
use std::path::Path;

use cmsweep::cmx::serialize_cmx;
use cmsweep::export::{parse_pivots, PivotLine};
use cmsweep::matrix::parse_rational;
use cmsweep::oracles::{
    ilp_brute_force, pivot_rank_oracle, random_connection_matrix, PartitionStyle, RandomSpec, ValueSet,
};
use cmsweep::sweep_z::{solve_min_leading, KernelProblem};
use cmsweep::tu::{
    is_surface_connection_matrix, sampled_tu_check, tu_certificate, SampledVerdict, SurfaceVerdict, TuCertificate,
    TuError,
};
use cmsweep::QMatrix;

use crate::failure::{load_cmx, read, write, Failure};
use crate::{GenRandomArgs, StyleArg};

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_pivots(path: &Path) -> Result<BTreeSet<PivotLine>, Failure> {
    parse_pivots(&read(path)?).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))
}

/// Prints the lines only in `a` (`-`) and only in `b` (`+`).
pub fn compare(a: &Path, b: &Path) -> Result<(), Failure> {
    let left = load_pivots(a)?;
    let right = load_pivots(b)?;
    if left == right {
        println!("equal: {} pivots", left.len());
        return Ok(());
    }
    for line in left.difference(&right) {
        println!("- {}", line.render());
    }
    for line in right.difference(&left) {
        println!("+ {}", line.render());
    }
    Err(Failure::Verification("pivot sets differ".into()))
}

fn describe(cert: &TuCertificate) -> String {
    let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    format!("rows {} cols {} det {}", list(&cert.rows), list(&cert.cols), cert.det)
}

pub fn tu_check(input: &Path, guard: usize, samples: Option<usize>, seed: u64) -> Result<(), Failure> {
    let matrix = load_cmx(input)?;
    if let Some(samples) = samples {
        return match sampled_tu_check(&matrix, samples, seed) {
            SampledVerdict::NotTu(cert) => {
                println!("not totally unimodular: {}", describe(&cert));
                Err(Failure::Verification("matrix is not totally unimodular".into()))
            }
            SampledVerdict::Unfalsified { samples } => {
                println!("unfalsified after {samples} sampled submatrices");
                Ok(())
            }
        };
    }
    match tu_certificate(&matrix, guard) {
        Ok(None) => {
            println!("totally unimodular");
            Ok(())
        }
        Ok(Some(cert)) => {
            println!("not totally unimodular: {}", describe(&cert));
            Err(Failure::Verification("matrix is not totally unimodular".into()))
        }
        Err(e @ TuError::TooLarge { .. }) => Err(Failure::Precondition(format!("{e}; use --samples"))),
    }
}

pub fn surface_check(input: &Path) -> Result<(), Failure> {
    let matrix = load_cmx(input)?;
    match is_surface_connection_matrix(&matrix)? {
        SurfaceVerdict::Accepted(profile) => {
            let list = |s: &BTreeSet<usize>| s.iter().map(|i| format!(" {i}")).collect::<String>();
            println!("surface: wells {} saddles {} sources {}", profile.wells, profile.saddles, profile.sources);
            println!("row_flips{}", list(&profile.row_flips));
            println!("col_flips{}", list(&profile.col_flips));
            Ok(())
        }
        SurfaceVerdict::Rejected(rejection) => {
            println!("not a surface matrix: {rejection}");
            Err(Failure::Verification(rejection.to_string()))
        }
    }
}

pub fn oracle_pivots(input: &Path) -> Result<(), Failure> {
    let matrix = load_cmx(input)?;
    for p in pivot_rank_oracle(&matrix) {
        println!("position {} {} {}", p.diagonal(), p.row, p.col);
    }
    Ok(())
}

fn parse_matrix(text: &str, columns: Option<usize>) -> Result<QMatrix, Failure> {
    let bad = |msg: String| Failure::Precondition(format!("--matrix: {msg}"));
    let rows: Vec<Vec<&str>> =
        text.split(';').map(|r| r.split_whitespace().collect::<Vec<_>>()).filter(|r| !r.is_empty()).collect();
    let c = match (rows.first(), columns) {
        (Some(first), _) => first.len(),
        (None, Some(c)) => c,
        (None, None) => return Err(bad("no rows; give --columns".into())),
    };
    if c == 0 || rows.iter().any(|r| r.len() != c) || columns.is_some_and(|n| n != c) {
        return Err(bad(format!("every row needs {c} entries")));
    }
    let mut a = QMatrix::zeros(rows.len(), c);
    for (i, row) in rows.iter().enumerate() {
        for (j, tok) in row.iter().enumerate() {
            a[(i + 1, j + 1)] = parse_rational(tok).ok_or_else(|| bad(format!("bad entry `{tok}`")))?;
        }
    }
    Ok(a)
}

pub fn oracle_ilp(matrix: &str, columns: Option<usize>, bound: i64) -> Result<(), Failure> {
    if bound < 1 {
        return Err(Failure::Precondition("--bound must be positive".into()));
    }
    let problem = KernelProblem::new(parse_matrix(matrix, columns)?);
    let join = |x: &[num_bigint::BigInt]| x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    match ilp_brute_force(&problem, bound) {
        Some(sol) => println!("enumeration x_c {} witness {}", sol.min, join(&sol.witness)),
        None => println!("enumeration none within {bound}"),
    }
    match solve_min_leading(&problem) {
        Some(x) => println!("solver x_c {} witness {}", x.last().expect("c >= 1"), join(&x)),
        None => println!("solver infeasible"),
    }
    Ok(())
}

pub fn gen_random(args: &GenRandomArgs) -> Result<(), Failure> {
    if args.m == 0 || args.b > args.m {
        return Err(Failure::Precondition(format!("need 1 <= m and b <= m, got m = {}, b = {}", args.m, args.b)));
    }
    if !(0.0..=1.0).contains(&args.density) {
        return Err(Failure::Precondition("--density must lie in [0, 1]".into()));
    }
    if args.max_entry < 1 {
        return Err(Failure::Precondition("--max-entry must be positive".into()));
    }
    let mut spec = RandomSpec::new(args.seed, args.m, args.b);
    spec.style = match args.style {
        StyleArg::Grouped => PartitionStyle::Grouped,
        StyleArg::Scattered => PartitionStyle::Scattered,
    };
    spec.density = args.density;
    spec.values = if args.max_entry == 1 { ValueSet::Unit } else { ValueSet::Bounded(args.max_entry) };
    spec.square_zero = args.square_zero;
    emit(&serialize_cmx(&random_connection_matrix(&spec)), args.out.as_deref())
}
