//! `gdirac`: verification suites, spectrum and invariant reports, benchmarks and operator dumps.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 for
//! usage or configuration errors.

mod commands;
mod config;
mod dump;
mod error;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use gdirac_core::suites::Suite;

use crate::commands::Output;
use crate::config::{CommonArgs, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "gdirac",
    version,
    about = "Exact verification of a Dirac operator on a semi-infinite wedge module"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites (all of them when none is named).
    Verify {
        /// Suites to run.
        #[arg(value_name = "SUITE")]
        suites: Vec<String>,
        /// Additional suite to run; may be repeated.
        #[arg(long = "suite", value_name = "SUITE")]
        suite: Vec<String>,
    },
    /// Report block dimensions and D² eigenvalues of the invariant sector.
    Spectrum,
    /// Report canonical bases of the invariant blocks.
    Invariants,
    /// Time the cut-off Dirac operator and Casimir over a ladder of cut-offs.
    Bench,
    /// Write the exact matrix of an operator on the bounded basis.
    #[command(after_help = DUMP_HELP)]
    DumpOp {
        /// Operator descriptor such as rhat:1,-1, ktilde:2,2 or dirac:N=3.
        descriptor: String,
    },
}

const DUMP_HELP: &str = "Descriptors:
  psi:K  psistar:K      fermion fields on Fock states
  rhat:P,Q              normal-ordered matrix unit r̂(E_PQ) on Fock states
  gamma:I,J             Clifford generator γ_IJ on spinor states
  ktilde:I,J            isotropy operator K̃_IJ on spinor states
  ktilde:N=n,I,J        cut-off isotropy operator K̃^(n)_IJ
  fermion               fermion number F on spinor states
  delta-g  delta-g:N=n  Casimir Δ_g and its cut-off Δ_g,ren^(n) on Fock states
  rho:P,Q               diagonal action ρ(E_PQ) on charge-zero tensor states
  dirac  dirac:N=n      Dirac operator D and its cut-off D_(n) on charge-zero tensor states

The basis is every state with indices bounded by --max-index, in ascending order.";

fn suite_help() -> String {
    let mut text = String::from("Suites:\n");
    for s in Suite::ALL {
        text.push_str(&format!("  {:<20}{}\n", s.name(), s.description()));
    }
    text
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let names: Vec<String> = match &cli.command {
        Command::Verify { suites, suite } => suites.iter().chain(suite).cloned().collect(),
        _ => Vec::new(),
    };
    let cfg = RunConfig::resolve(&cli.common, &names)?;
    let out = match &cli.command {
        Command::Verify { .. } => commands::verify(&cfg)?,
        Command::Spectrum => commands::spectrum(&cfg)?,
        Command::Invariants => commands::invariants(&cfg)?,
        Command::Bench => commands::bench(&cfg)?,
        Command::DumpOp { descriptor } => commands::dump_op(descriptor, &cfg)?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => print!("{}", out.text),
    }
    Ok(out)
}

fn main() -> ExitCode {
    let help = suite_help();
    let matches = Cli::command()
        .mut_subcommand("verify", |c| c.after_help(help))
        .get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => {
            for n in &out.notes {
                eprintln!("{n}");
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
