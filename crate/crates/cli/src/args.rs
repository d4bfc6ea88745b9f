//! Command-line parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use ultracone::permgroup::Permutation;

use crate::certificate::{certify_commutator, certify_conjugates, certify_intnorm, Certificate};
use crate::config::{Overrides, RunConfig, Suite, CONFIG_ENV};
use crate::{run_suite, verify_certificate, CliError};

#[derive(Debug, Parser)]
#[command(name = "ultracone", version, about = "Verify norm, contraction and covering lemmas on finite stages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the suites named by --suite (all of them by default).
    Run(RunArgs),
    /// Transposition, support and 3-cycle norms and their word tables.
    Norms(RunArgs),
    /// Cutting maps, splittings and displaced sets.
    Cutting(RunArgs),
    /// Class covering, commutator witnesses and conjugate products.
    Covering(RunArgs),
    /// Norms on the integers from factorial generators.
    Intnorm(RunArgs),
    /// Rank norms and projections on matrix groups.
    Matnorm(RunArgs),
    /// Projections on free products and direct sums.
    Products(RunArgs),
    /// Scaled sequences, stage contractions and the circle correspondence.
    Coneprobe(RunArgs),
    /// Every suite.
    All(RunArgs),
    /// Re-check a certificate file; exit 0 when it holds.
    VerifyCertificate { path: PathBuf },
    /// Produce a certificate as JSON.
    #[command(subcommand)]
    Certify(CertifyCommand),
}

#[derive(Debug, Subcommand)]
pub enum CertifyCommand {
    /// Write TARGET as a product of conjugates of BASE.
    Conjugates {
        #[arg(long)]
        target: Permutation,
        #[arg(long)]
        base: Permutation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an even TARGET as a commutator in the alternating group.
    Commutator {
        #[arg(long)]
        target: Permutation,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an integer as a sum of signed generators t^m m!.
    Intnorm {
        #[arg(long, allow_hyphen_values = true)]
        target: BigInt,
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Search for a shortest sum instead of the greedy one.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Suites to run; repeat or separate with commas.
    #[arg(long = "suite", value_delimiter = ',')]
    pub suites: Vec<Suite>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Random pairs per matrix dimension.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub permutation_pairs: Option<usize>,
    #[arg(long)]
    pub certificates: Option<usize>,
    /// Largest n for the integer norms.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Register the identity as a norm-decreasing projection (negative control).
    #[arg(long)]
    pub broken_projection: bool,
    /// TOML file whose values override the flags.
    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            suites: (!self.suites.is_empty()).then(|| self.suites.clone()),
            max_degree: self.max_degree,
            samples: self.samples,
            permutation_pairs: self.permutation_pairs,
            certificates: self.certificates,
            depth: self.depth,
            tau: self.tau,
            seed: self.seed,
            out: self.out.clone(),
            jobs: self.jobs,
            broken_projection: self.broken_projection.then_some(true),
        }
    }
}

fn run_command(args: &RunArgs, suite: Option<Suite>) -> Result<i32, CliError> {
    let mut flags = args.overrides();
    if let Some(s) = suite {
        flags.suites = Some(vec![s]);
    }
    let config = RunConfig::resolve(flags, args.config.as_deref())?;
    let outcome = run_suite(&config)?;
    for check in outcome.report.checks().filter(|c| !c.passed()) {
        println!("FAIL {}: {}", check.id, check.witness.as_deref().unwrap_or("(no witness)"));
    }
    let summary = &outcome.report.summary;
    println!(
        "{} of {} checks passed (seed {}); report written to {}",
        summary.checks - summary.failed,
        summary.checks,
        config.seed,
        config.out.display()
    );
    Ok(outcome.exit_code())
}

fn emit(cert: Certificate, out: Option<&PathBuf>) -> Result<i32, CliError> {
    let text = cert.to_json();
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run(a) => run_command(&a, None),
        Command::Norms(a) => run_command(&a, Some(Suite::Norms)),
        Command::Cutting(a) => run_command(&a, Some(Suite::Cutting)),
        Command::Covering(a) => run_command(&a, Some(Suite::Covering)),
        Command::Intnorm(a) => run_command(&a, Some(Suite::Intnorm)),
        Command::Matnorm(a) => run_command(&a, Some(Suite::Matnorm)),
        Command::Products(a) => run_command(&a, Some(Suite::Products)),
        Command::Coneprobe(a) => run_command(&a, Some(Suite::Coneprobe)),
        Command::All(a) => run_command(&a, Some(Suite::All)),
        Command::VerifyCertificate { path } => {
            for line in verify_certificate(&path)? {
                println!("ok: {line}");
            }
            Ok(0)
        }
        Command::Certify(CertifyCommand::Conjugates { target, base, out }) => {
            emit(certify_conjugates(&target, &base)?, out.as_ref())
        }
        Command::Certify(CertifyCommand::Commutator { target, degree, out }) => {
            emit(certify_commutator(&target, degree)?, out.as_ref())
        }
        Command::Certify(CertifyCommand::Intnorm { target, base, exact, out }) => {
            emit(certify_intnorm(&target, base, exact)?, out.as_ref())
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
