//! `qhmetric` command-line tool.
//!
//! Exit codes: 0 pass, 1 check failure, 2 internal error, 64 usage error.

mod commands;
mod format;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "qhmetric", version, about = "Quasihyperbolic metric and John checks for fractal domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cantor-dust exponent bounds over a grid of α, as CSV.
    BoundsCantor(BoundsArgs),
    /// Koch-snowflake exponent bounds over a grid of a, as CSV.
    BoundsKoch(BoundsArgs),
    /// Boundary dimension of a domain.
    Dimension(ParamArgs),
    /// Numeric upper bound on the quasihyperbolic distance between two points.
    QhDist(QhDistArgs),
    /// Checks the explicit path to the n-th chain point against its closed-form bracket.
    QhPathCheck(PathCheckArgs),
    /// Checks John curve families against the theorem constant.
    JohnCheck(JohnArgs),
    /// Draws a domain and optionally the explicit path as SVG.
    Render(RenderArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cantor,
    Koch,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistKind {
    Cantor,
    Koch,
    Punctured,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Parameter grid `start:stop:step`, stop inclusive.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(short = 'a', long = "alpha")]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct QhDistArgs {
    #[arg(long, value_enum)]
    pub kind: DistKind,
    /// Domain parameter (ignored for the punctured plane).
    #[arg(short = 'a', long = "alpha", default_value_t = 0.5)]
    pub alpha: f64,
    /// Start point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    /// End point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// Initial cell-size factor.
    #[arg(long, default_value_t = 0.5)]
    pub h: f64,
    /// Stop refining once the relative change drops below this.
    #[arg(long, default_value_t = 1e-2)]
    pub refine: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct PathCheckArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(short = 'a', long = "alpha")]
    pub alpha: f64,
    #[arg(long)]
    pub n: i64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct JohnArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(short = 'a', long = "alpha")]
    pub alpha: f64,
    /// Deepest chain generation in the family.
    #[arg(long, default_value_t = 6)]
    pub n: i64,
    /// Sample spacing as a fraction of curve length.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(short = 'a', long = "alpha")]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    /// Overlay the explicit path to the n-th chain point.
    #[arg(long, default_value_t = 0)]
    pub n: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Internal(String),
}

impl From<qhmetric::QhError> for Failure {
    fn from(e: qhmetric::QhError) -> Self {
        match e {
            qhmetric::QhError::InvalidParam(msg) => Failure::Usage(msg),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QHMETRIC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::BoundsCantor(args) => commands::bounds(Kind::Cantor, &args),
        Command::BoundsKoch(args) => commands::bounds(Kind::Koch, &args),
        Command::Dimension(args) => commands::dimension(&args),
        Command::QhDist(args) => commands::qh_dist(&args),
        Command::QhPathCheck(args) => commands::path_check(&args),
        Command::JohnCheck(args) => commands::john_check(&args),
        Command::Render(args) => commands::render(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
