//! The `segstab` command line.
//!
//! Exit codes: 0 on success, 1 when a solution is infeasible or a
//! certificate check fails, 2 on usage and input errors.

pub mod bench;
pub mod commands;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use segstab_core::Error as CoreError;

#[derive(Parser, Debug)]
#[command(name = "segstab", version, about = "Stabbing rectangles with horizontal segments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Canonical candidate segments of an instance.
    Candidates {
        instance: PathBuf,
        /// Drop candidates whose stab set is dominated by a shorter one.
        #[arg(long)]
        prune: bool,
        /// Include vertical candidates.
        #[arg(long)]
        hv: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Snap the candidates onto two x-laminar families.
    Laminarize {
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Solve with an exact, greedy or LP baseline.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Exact)]
        algo: Algo,
        /// Allow vertical segments too.
        #[arg(long)]
        hv: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[command(flatten)]
        out: Output,
    },
    /// LP-relative rounding through the laminar decomposition.
    Approx {
        instance: PathBuf,
        #[arg(long)]
        hv: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Shallow-cell counts `(m, k, cells)` of the candidate family.
    Scc {
        instance: PathBuf,
        /// Largest depth reported.
        #[arg(long)]
        k: usize,
        /// Random subfamilies to sample; exhaustive when omitted and small.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Measure the laminarized family instead of the pruned candidates.
        #[arg(long)]
        laminar: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Compile a hardness reduction into a stabbing instance.
    #[command(subcommand)]
    Harden(HardenCommand),
    /// Draw an instance as SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Overlay the laminarized candidates, one style per family.
        #[arg(long)]
        laminar: bool,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Run several algorithms over every instance file in a directory.
    Bench {
        dir: PathBuf,
        /// Algorithms to run; repeat or separate with commas.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Exact, Algo::Greedy, Algo::GreedyWidth, Algo::Approx])]
        algo: Vec<Algo>,
        #[arg(long)]
        hv: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Check a solution against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Uniformly random rects on a grid.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        range: i64,
        #[arg(long, default_value_t = 4)]
        denom: i64,
        #[arg(long, default_value_t = 24)]
        max_side: i64,
        #[command(flatten)]
        out: Output,
    },
    /// The family with quadratically many depth-2 cells.
    Scc {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Nested rects on which greedy pays for every level.
    GreedyTrap {
        #[arg(long)]
        levels: usize,
        /// Width decrement per level, as `p/q`.
        #[arg(long, default_value = "1/100")]
        eps: String,
        /// Keep even levels only, with multiplicities (for width greedy).
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Universal line plus many equal-size stab sets.
    Staircase {
        #[arg(long)]
        levels: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Lift an instance and its candidates to 3D box piercing.
    Piercing {
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum HardenCommand {
    /// Vertex cover on a planar graph, read as an edge list.
    Vc {
        graph: PathBuf,
        /// Compute the minimum vertex cover and the expected optimum.
        #[arg(long)]
        oracle: bool,
        /// Certificate path; defaults to the instance path with `.cert.json`.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Special 3-set cover encoded by fixed segments.
    Spsc {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = SpscModeArg::Card)]
        mode: SpscModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compute the set cover optimum by enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Exact,
    Greedy,
    GreedyWidth,
    Lp,
    Approx,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::Greedy => "greedy",
            Algo::GreedyWidth => "greedy-width",
            Algo::Lp => "lp",
            Algo::Approx => "approx",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpscModeArg {
    Card,
    Constr,
}

/// Failure categories, mapped onto exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Infeasible solution or failed certificate.
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => 1,
            CliError::Core(
                CoreError::Uncoverable(_)
                | CoreError::Certificate(_)
                | CoreError::Layout(_)
                | CoreError::InfeasibleSubCover { .. }
                | CoreError::InfeasibleScaledLp { .. },
            ) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("segstab: {e}");
            e.exit_code()
        }
    }
}
