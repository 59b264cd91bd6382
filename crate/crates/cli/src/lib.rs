//! Command-line front end for `tpwalk`.
//!
//! Every command reads a network document (see [`document`]) or plain
//! arguments and prints a `key: value` report that starts with `status`.
//! Exit codes: 0 success, 1 unreadable input or arguments, 2 domain error
//! raised by the library, 3 failed internal cross-check.

pub mod commands;
pub mod document;
pub mod report;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use document::{DocumentError, Kind, NetworkDocument};
pub use report::Report;

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Library(#[from] tpwalk::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Document { .. } | CliError::Io { .. } => EXIT_PARSE,
            CliError::Library(e) if e.is_invariant_violation() => EXIT_INVARIANT,
            CliError::Library(_) => EXIT_DOMAIN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "tpwalk",
    version,
    about = "Walk and hitting matrices, loop-erased walk oracles and total positivity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Series,
    Numeric,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Network document (`-` for stdin).
    pub document: String,
    #[arg(long, value_enum, default_value = "numeric")]
    pub mode: ModeArg,
    /// Truncation order in series mode.
    #[arg(long, default_value_t = tpwalk::linalg::DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Source vertex names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rows: Vec<String>,
    /// Target vertex names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cols: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MinorArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[command(flatten)]
    pub sets: SetArgs,
    /// Minor of the hitting matrix instead of the walk matrix.
    #[arg(long)]
    pub hitting: bool,
}

#[derive(Debug, Args)]
pub struct LeArgs {
    pub document: String,
    /// Edge ids in document order, starting at 0.
    #[arg(long, value_delimiter = ',')]
    pub walk: Vec<usize>,
    /// Start vertex of an empty walk.
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub document: String,
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    #[command(flatten)]
    pub sets: SetArgs,
    /// Identity permutation only, under the crossing hypothesis.
    #[arg(long)]
    pub planar: bool,
    #[arg(long)]
    pub hitting: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TnnMatrix {
    Hitting,
    Walk,
}

#[derive(Debug, Args)]
pub struct TnnArgs {
    pub document: String,
    #[arg(long, default_value_t = 4)]
    pub max_minor: usize,
    #[arg(long, value_enum, default_value = "hitting")]
    pub matrix: TnnMatrix,
    /// Row subset in the order to test (default: all rows by name).
    #[arg(long, value_delimiter = ',')]
    pub rows: Vec<String>,
    /// Column subset in the order to test (default: all columns by name).
    #[arg(long, value_delimiter = ',')]
    pub cols: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum ResistorCommand {
    /// Response matrix on the boundary.
    Response { document: String },
    /// Path-expansion minor of the response matrix, checked against the determinant.
    Ingerman {
        document: String,
        #[command(flatten)]
        sets: SetArgs,
    },
    /// Associated random walk as a directed document.
    Markov {
        document: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Boundary hitting matrix from the response matrix, checked against the walk.
    Hitting { document: String },
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Monte Carlo estimate of a hitting-matrix minor.
    HittingMinor {
        document: String,
        #[command(flatten)]
        sets: SetArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = tpwalk::stochastic::DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Debug, Args)]
pub struct BernoulliArgs {
    /// Step probability to the right, `1/2 < p <= 1`.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub m: u32,
    /// Also evaluate the chain clipped to `[-radius, radius]`.
    #[arg(long)]
    pub radius: Option<i64>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub x1: f64,
    #[arg(long)]
    pub x2: f64,
    #[arg(long)]
    pub y1: f64,
    #[arg(long)]
    pub y2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Quadrant,
    Strip,
}

#[derive(Debug, Subcommand)]
pub enum BrownianCommand {
    /// 2×2 determinant of the quadrant kernel.
    QuadrantDet2(PairArgs),
    /// Conditional non-intersection probabilities for two paths.
    Cond(PairArgs),
    /// Non-intersection probability for starts `1, alpha`.
    Nonint {
        /// A number greater than 1, or `phi`.
        #[arg(long)]
        alpha: String,
        /// Also integrate the determinant numerically.
        #[arg(long)]
        quadrature: bool,
    },
    /// Total positivity of a sampled kernel.
    TpCheck {
        #[arg(long, value_enum)]
        kernel: KernelArg,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        xs: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        ys: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        max_minor: usize,
    },
    /// Grid walk hitting masses against the quadrant kernel.
    Discretize {
        #[arg(long)]
        h: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        x0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Unit,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Directed,
    Conductivity,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    /// Number of sources and targets.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Boundary position of the first source, counterclockwise from the bottom left.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Boundary positions skipped between the last source and the last target.
    #[arg(long, default_value_t = 1)]
    pub gap: usize,
    #[arg(long, value_enum, default_value = "directed")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "unit")]
    pub weights: WeightsArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk matrix `(I - Q)^{-1}`.
    WalkMatrix(MatrixArgs),
    /// First-boundary-hit matrix.
    HittingMatrix(MatrixArgs),
    /// Determinant of a walk or hitting submatrix.
    Minor(MinorArgs),
    /// Loop erasure of a walk given by edge ids.
    Le(LeArgs),
    /// Loop-erased enumeration against the series determinant.
    OracleCheck(OracleArgs),
    /// Total nonnegativity of the hitting or walk matrix.
    TnnCheck(TnnArgs),
    #[command(subcommand)]
    Resistor(ResistorCommand),
    #[command(subcommand)]
    Mc(McCommand),
    /// Closed forms for the biased walk on the integers.
    Bernoulli(BernoulliArgs),
    #[command(subcommand)]
    Brownian(BrownianCommand),
    /// Pendant grid document with crossing source and target sets.
    Grid(GridArgs),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput {
                    code: EXIT_PARSE,
                    stdout: Report::new("error").render(),
                    stderr: text,
                }
            } else {
                RunOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok(out) => RunOutput {
            code: out.code,
            stdout: out.text,
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            code: e.exit_code(),
            stdout: Report::new("error").render(),
            stderr: format!("error: {e}\n"),
        },
    }
}
