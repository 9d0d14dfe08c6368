//! Command-line front end for the `linear-contracts` solver.
//!
//! Exit codes: 0 success, 1 bad input or arguments, 2 not implementable /
//! precondition or assumption failure / not an ambiguous instance, 3 size
//! limit, 4 an audited bound or robustness check failed, 5 internal
//! solver error. Errors are reported as JSON on stderr.

pub mod commands;
pub mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linear_contracts::rational::ParseRationalError;
use linear_contracts::{parse_rational, ContractError, FamilyError, ModelError, Rational, RobustError};
use serde_json::json;
use thiserror::Error;

pub use commands::CertificateView;
pub use document::{AmbiguousDocument, InstanceDocument, Metadata};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Robust(#[from] RobustError),
    #[error("{message}")]
    NotImplementable {
        message: String,
        certificates: Vec<CertificateView>,
    },
    #[error("{0}")]
    Usage(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Rational(_) | CliError::Model(_) => EXIT_INPUT,
            CliError::Family(_) | CliError::Usage(_) => EXIT_INPUT,
            CliError::NotImplementable { .. } => EXIT_PRECONDITION,
            CliError::Contract(e) => match e {
                ContractError::LengthMismatch(..) => EXIT_INPUT,
                ContractError::Lp(_) => EXIT_INTERNAL,
                _ => EXIT_PRECONDITION,
            },
            CliError::Robust(e) => match e {
                RobustError::NotAmbiguous(_) => EXIT_PRECONDITION,
                RobustError::SizeLimit { .. } => EXIT_SIZE_LIMIT,
                RobustError::ContractLength { .. } => EXIT_INPUT,
                RobustError::ConstructionFailed(_) => EXIT_INTERNAL,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) | CliError::Rational(_) => "parse",
            CliError::Model(_) => "malformed_instance",
            CliError::Family(_) => "bad_params",
            CliError::Usage(_) => "usage",
            CliError::NotImplementable { .. } => "not_implementable",
            CliError::Contract(ContractError::AssumptionViolated(_)) => "assumption_violated",
            CliError::Contract(ContractError::NoImplementableAction) => "not_implementable",
            CliError::Contract(ContractError::PreconditionFailed(_)) => "precondition_failed",
            CliError::Contract(ContractError::LengthMismatch(..)) => "length_mismatch",
            CliError::Contract(ContractError::Lp(_)) => "internal",
            CliError::Robust(RobustError::NotAmbiguous(_)) => "not_ambiguous",
            CliError::Robust(RobustError::SizeLimit { .. }) => "size_limit",
            CliError::Robust(RobustError::ContractLength { .. }) => "length_mismatch",
            CliError::Robust(RobustError::ConstructionFailed(_)) => "internal",
        }
    }

    /// Machine-readable error document.
    pub fn payload(&self) -> serde_json::Value {
        let mut doc = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::NotImplementable { certificates, .. } = self {
            doc["certificates"] = serde_json::to_value(certificates).expect("plain data serializes");
        }
        doc
    }
}

pub(crate) fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Inclusive integer range, written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub fn values(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

pub(crate) fn range_arg(s: &str) -> Result<IntRange, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad integer {t:?} in range {s:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(IntRange { lo, hi })
}

#[derive(Debug, Parser)]
#[command(
    name = "lincon",
    version,
    about = "Exact solver for hidden-action principal-agent contracts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance for one contract class.
    Solve(SolveArgs),
    /// Emit an instance document from a named family.
    Generate(GenerateArgs),
    /// Compare optimal, linear and monotone payoffs against the ratio bounds.
    Audit(AuditArgs),
    /// Check worst-case optimality of linear contracts on an ambiguous instance.
    Robust(RobustArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the main output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fractional digits in decimal renderings.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Optimal,
    Linear,
    Monotone,
    Debt,
    SinglePayment,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance document (JSON).
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Optimal)]
    pub mode: Mode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    pub eps: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "1/1000")]
    pub delta: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "1/1000")]
    pub gamma: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Instance document to audit; omit to sweep a family.
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Action counts to sweep.
    #[arg(long, value_parser = range_arg, default_value = "3")]
    pub n: IntRange,
    /// Outcome counts to sweep (random-spanning only).
    #[arg(long, value_parser = range_arg, default_value = "4")]
    pub m: IntRange,
    /// Seeds per (n, m) cell, counting up from --seed (random-spanning only).
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RobustArgs {
    /// Ambiguous instance document (JSON).
    pub instance: PathBuf,
    /// Number of sampled contracts.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include the affine-construction trace for every sample.
    #[arg(long)]
    pub trace: bool,
    /// Upper limit on adversary enumeration size.
    #[arg(long, default_value_t = 100_000)]
    pub cap: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Text produced by a successful command, and its exit code.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Generate(args) => commands::generate(&args),
        Command::Audit(args) => commands::audit(&args),
        Command::Robust(args) => commands::robust(&args),
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            };
        }
    };
    match execute(cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stderr.write_all(out.stderr.as_bytes());
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.payload());
            e.exit_code()
        }
    }
}
