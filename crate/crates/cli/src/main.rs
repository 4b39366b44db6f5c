//! `spectramass`: run a spectral-mass experiment and write CSV.
//!
//! Exit codes: 0 success, 1 invalid input or a failed check, 2 numerical
//! non-convergence.

mod commands;
mod grid;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectramass::domains::BoundaryCondition;

use crate::output::{render_svg, write_csv};

#[derive(Parser, Debug)]
#[command(name = "spectramass", version, about = "Spectral mass functions and isotypic eigenvalue splitting")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// CSV destination; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for Monte Carlo estimates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for grid evaluation (falls back to SPECTRAMASS_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write a line plot of the CSV rows.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Euclidean,
    Lattice,
    Hyperbolic,
    Heisenberg,
    Tree,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// Dimension n (branching q for trees).
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// M(λ) on a homogeneous space.
    Mass {
        #[command(flatten)]
        space: SpaceArgs,
        /// λ grid, start:stop:step or a comma list.
        #[arg(long)]
        lambda: String,
    },
    /// Average of K_λ(x,x) over [0, R] on the half-line.
    Halfline {
        #[arg(long)]
        lambda: String,
        #[arg(long = "r")]
        r: f64,
        #[arg(long, value_enum)]
        bc: Bc,
    },
    /// Limits of the averaged counts over cubes with sides j^p, j = 1..count.
    Cubes {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_enum)]
        bc: Bc,
    },
    /// Isotypic counts N_j(λ) for a graph with a group action (JSON input).
    Split {
        #[arg(long)]
        graph: PathBuf,
        /// Evaluate on this grid instead of at every eigenvalue.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// D₄ counts on the flat square torus up to λ_max.
    Torus {
        #[arg(long)]
        lambda_max: f64,
    },
    /// Sierpinski gasket level m: spectrum counts, D₃ splitting, Weyl ratio or decimation.
    Sg {
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "neumann")]
        bc: Bc,
        #[arg(long, conflicts_with_all = ["split", "decimation"])]
        weyl: bool,
        #[arg(long, conflicts_with = "decimation")]
        split: bool,
        #[arg(long)]
        decimation: bool,
    },
    /// Kernel sums over the N-fold circle cover, or the line cover with --line.
    Cover {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        sheets: u64,
        #[arg(long)]
        line: bool,
        /// Number of deck terms |γ| ≤ Γ for --line.
        #[arg(long, default_value_t = 100_000)]
        gamma: usize,
    },
    /// SO(2) component masses on the plane averaged over the disc of radius R.
    So2 {
        #[arg(long)]
        lambda: String,
        /// Angular frequencies, e.g. 0:8:1.
        #[arg(long, default_value = "0:8:1")]
        j: String,
        #[arg(long = "r", default_value_t = 1e4)]
        r: f64,
    },
    /// Counts on SU(2) × M per irrep.
    Product {
        #[arg(long)]
        lambda: String,
        /// Number of SU(2) irreps, dimensions 1..=levels.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Base counts c·λ^β: coefficient.
        #[arg(long, default_value_t = 1.0)]
        base_c: f64,
        /// Base counts c·λ^β: exponent.
        #[arg(long, default_value_t = 1.0)]
        base_beta: f64,
        /// Base eigenvalues as a comma list; overrides the power law.
        #[arg(long)]
        base_eigs: Option<String>,
    },
    /// Heat kernel h_t from the spectral mass (--t) or the bound M(λ) ≤ e·h_{1/λ} (--lambda).
    Heat {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, required_unless_present = "lambda")]
        t: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Runs the acceptance checks and prints one line per criterion.
    Verify {
        /// Only these criteria, e.g. 1,4,9.
        #[arg(long)]
        only: Option<String>,
    },
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Lib(spectramass::Error),
    Io(io::Error),
    Usage(String),
    /// A check ran to completion and did not hold.
    Failed(String),
}

impl From<spectramass::Error> for CliError {
    fn from(e: spectramass::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Failed(s) => write!(f, "check failed: {s}"),
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("SPECTRAMASS_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("SPECTRAMASS_THREADS must be a count, got '{v}'"))),
        Err(_) => Ok(0),
    }
}

fn header(args: &[String], seed: u64) -> String {
    format!(
        "# spectramass {} cmd={} seed={seed}",
        env!("CARGO_PKG_VERSION"),
        args.get(1..).unwrap_or_default().join(" ")
    )
}

fn run(cli: Cli, args: &[String]) -> Result<(), CliError> {
    let threads = thread_count(cli.global.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    let report = pool.install(|| commands::dispatch(&cli.command, cli.global.seed))?;
    let head = header(args, cli.global.seed);
    match &cli.global.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_csv(&mut w, &head, &report.rows)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_csv(&mut w, &head, &report.rows)?;
            w.flush()?;
        }
    }
    if let Some(path) = &cli.global.svg {
        std::fs::write(path, render_svg(&head, &report.rows))?;
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    match report.failure {
        Some(why) => Err(CliError::Failed(why)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spectramass: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Lib(spectramass::Error::NonConvergent("x".into())).exit_code(), 2);
        assert_eq!(CliError::Lib(spectramass::Error::InvalidInput("x".into())).exit_code(), 1);
        assert_eq!(CliError::Failed("x".into()).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    }

    #[test]
    fn header_line() {
        let args: Vec<String> = ["spectramass", "mass", "--dim", "2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            header(&args, 7),
            format!("# spectramass {} cmd=mass --dim 2 seed=7", env!("CARGO_PKG_VERSION"))
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
