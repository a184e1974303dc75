//! `diocheck`: command-line front end.
//!
//! Exit codes: 0 pass, 1 audit or assertion failure, 2 usage or invalid
//! input, 3 resource budget exceeded.

mod commands;
mod config;
mod emit;
mod objective;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use thiserror::Error;

use diocheck::analytic_eval::EvalError;
use diocheck::pair_calculus::PairError;
use diocheck::param_audit::ParamError;
use diocheck::prime_tables::TableError;
use diocheck::rosser_sieve::RosserError;
use diocheck::sieve_functions::SieveFnError;
use diocheck::solver::SolverError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PairError> for CliError {
    fn from(e: PairError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SieveFnError> for CliError {
    fn from(e: SieveFnError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RosserError> for CliError {
    fn from(e: RosserError) -> Self {
        match e {
            RosserError::Budget(_) => CliError::Budget(e.to_string()),
            RosserError::SumsOutOfOrder => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Oscillation { .. } => CliError::Budget(e.to_string()),
            EvalError::Table(t) => t.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::MemoryBudget { .. } | SolverError::GridResolution { .. } => CliError::Budget(e.to_string()),
            SolverError::Table(t) => t.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "diocheck", version, about = "Finite checks for Diophantine inequalities in primes with almost-prime shifts")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// key=value defaults; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent pair calculus.
    #[command(subcommand)]
    Pairs(commands::PairsCmd),
    /// Parameter derivation and exact exponent audits.
    #[command(subcommand)]
    Params(commands::ParamsCmd),
    /// Linear sieve functions and margins at a level s0.
    SieveConsts(commands::SieveConstsArgs),
    /// Rosser weights.
    #[command(subcommand)]
    Rosser(commands::RosserCmd),
    /// Prime and Omega tables.
    #[command(subcommand)]
    Primes(commands::PrimesCmd),
    /// Exponential sums and the smoothing kernel.
    #[command(subcommand)]
    Expsum(commands::ExpsumCmd),
    /// Count solutions of |p1^c + p2^c - R| < Delta.
    Search2(commands::Search2Args),
    /// Count solutions of |p1^c + ... + p4^c - N| < Delta.
    Search4(commands::Search4Args),
    /// Sample targets R in (N, 2N] and count binary solutions.
    Scan(commands::ScanArgs),
    /// Run every audit suite and print a pass/fail table.
    PaperAudit(commands::PaperAuditArgs),
}

/// Long flags accepted by the subcommand named in `args`, globals included.
fn accepted_flags(args: &[String]) -> Option<Vec<String>> {
    let root = Cli::command();
    let mut globals: Vec<String> = root.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect();
    let mut cur = &root;
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        if a == "--threads" || a == "--config" {
            iter.next();
            continue;
        }
        if a.starts_with('-') {
            continue;
        }
        match cur.find_subcommand(a) {
            Some(sub) => cur = sub,
            None => break,
        }
    }
    if cur.has_subcommands() {
        return None;
    }
    globals.extend(cur.get_arguments().filter_map(|a| a.get_long().map(str::to_string)));
    Some(globals)
}

/// Every long flag of every subcommand, for typo detection in config files.
fn all_flags(cmd: &clap::Command, out: &mut Vec<String>) {
    out.extend(cmd.get_arguments().filter_map(|a| a.get_long().map(str::to_string)));
    for sub in cmd.get_subcommands() {
        all_flags(sub, out);
    }
}

fn expand_args(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config::config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone().into(), source })?;
    let entries = config::parse(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let mut known = Vec::new();
    all_flags(&Cli::command(), &mut known);
    if let Some(bad) = entries.iter().find(|e| !known.contains(&e.key)) {
        return Err(CliError::Usage(format!("{path}: unknown key {:?}", bad.key)));
    }
    // keys meant for other subcommands are skipped
    let entries: Vec<config::Entry> = match accepted_flags(&args) {
        Some(ok) => entries.into_iter().filter(|e| ok.contains(&e.key)).collect(),
        None => Vec::new(),
    };
    Ok(config::merge(args, &entries))
}

fn run() -> Result<bool, CliError> {
    let args = expand_args(std::env::args().collect())?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
