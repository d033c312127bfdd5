use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;
mod run;

use failure::Failure;

/// Sweeping and cancellation of connection matrices.
#[derive(Debug, Parser)]
#[command(name = "cmsweep", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an algorithm on a CMX file and write its artifacts.
    Run(RunArgs),
    /// Compare two pivot files.
    Compare { a: PathBuf, b: PathBuf },
    /// Total unimodularity.
    Tu {
        #[command(subcommand)]
        command: TuCommand,
    },
    /// Surface connection matrices.
    Surface {
        #[command(subcommand)]
        command: SurfaceCommand,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Random instances.
    Gen {
        #[command(subcommand)]
        command: GenCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Z,
    Accumulated,
    Incremental,
    Block,
    Revised1,
    Rowcancel,
    Smale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerbosityArg {
    Pivots,
    Final,
    Full,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "pivots")]
    pub verbosity: VerbosityArg,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Run the invariant suites that apply to the algorithm and write verify.txt.
    #[arg(long)]
    pub verify: bool,
    /// Write the cancellation schedule to schedule.txt.
    #[arg(long)]
    pub schedule: bool,
    /// Write the reduced complexes to reduction/step<r>.cmx (rowcancel and smale only).
    #[arg(long)]
    pub reduction: bool,
}

#[derive(Debug, Subcommand)]
enum TuCommand {
    /// Exhaustive check, or a sampled falsifier with --samples.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = cmsweep::tu::DEFAULT_TU_GUARD)]
        guard: usize,
        /// Test this many random square submatrices instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum SurfaceCommand {
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print a random surface matrix as CMX.
    Gen {
        #[arg(long)]
        wells: usize,
        #[arg(long)]
        saddles: usize,
        #[arg(long)]
        sources: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Apply a random sign-change similarity.
        #[arg(long)]
        flips: bool,
        /// Interleave the labels of the three groups.
        #[arg(long)]
        scatter: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Primary pivot positions predicted from ranks alone.
    Pivots {
        #[arg(long)]
        input: PathBuf,
    },
    /// Least positive x_c with A x = 0 by enumeration, next to the lattice solver.
    Ilp {
        /// Rows separated by `;`, entries by spaces, e.g. "-2 -3; 1 1".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Number of unknowns when the matrix has no rows.
        #[arg(long)]
        columns: Option<usize>,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Grouped,
    Scattered,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Print a random connection matrix as CMX.
    Random(GenRandomArgs),
}

#[derive(Debug, Args)]
pub struct GenRandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub b: usize,
    #[arg(long, value_enum, default_value = "grouped")]
    pub style: StyleArg,
    #[arg(long, default_value_t = 0.4)]
    pub density: f64,
    /// Largest entry magnitude; 1 restricts entries to ±1.
    #[arg(long, default_value_t = 3)]
    pub max_entry: i64,
    /// Draw columns from the kernel of the previous block so that Δ² = 0.
    #[arg(long)]
    pub square_zero: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => run::run(&args),
        Command::Compare { a, b } => commands::compare(&a, &b),
        Command::Tu { command: TuCommand::Check { input, guard, samples, seed } } => {
            commands::tu_check(&input, guard, samples, seed)
        }
        Command::Surface { command: SurfaceCommand::Check { input } } => commands::surface_check(&input),
        Command::Surface { command: SurfaceCommand::Gen { wells, saddles, sources, seed, flips, scatter, out } } => {
            let mut spec = cmsweep::tu::SurfaceSpec::new(seed, wells, saddles, sources);
            spec.flips = flips;
            spec.scatter = scatter;
            commands::emit(&cmsweep::cmx::serialize_cmx(&cmsweep::tu::generate_surface_matrix(&spec)), out.as_deref())
        }
        Command::Oracle { command: OracleCommand::Pivots { input } } => commands::oracle_pivots(&input),
        Command::Oracle { command: OracleCommand::Ilp { matrix, columns, bound } } => {
            commands::oracle_ilp(&matrix, columns, bound)
        }
        Command::Gen { command: GenCommand::Random(args) } => commands::gen_random(&args),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("cmsweep: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
