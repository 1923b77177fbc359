//! `stabtrim` command-line front end.
//!
//! Exit codes: 0 success, 1 domain-level negative (infeasible trim, invalid
//! or mixed state, oracle mismatch), 2 usage or parse error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Line-oriented `key=value` records, first line `schema=…`.
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "stabtrim", version, about = "Stabilizer entanglement canonical forms and trimming")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Relative tolerance for floating-point checks (CV planes, dense oracle).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Expected qudit dimension; input files must agree.
    #[arg(long, global = true)]
    pub dim: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report validity, purity and group order of a tableau.
    Validate { file: PathBuf },
    /// Canonical bipartite form and pair-count entanglement.
    Canon {
        file: PathBuf,
        /// `A|BC` over the header labels, or one A/B character per site.
        #[arg(long)]
        partition: String,
    },
    /// Trimming verdict, plan and executed result (CRT report for square-free D).
    Trim {
        file: PathBuf,
        /// Per-site A/B/C labels overriding the header.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Monte-Carlo trimmability survey as CSV (runtime on stderr).
    Survey {
        #[arg(long)]
        sites: usize,
        /// Fixed per-site labels; random tripartitions otherwise.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Skip executing feasible plans.
        #[arg(long)]
        no_execute: bool,
        /// Run samples on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Canonical entanglement against dense von Neumann entropy.
    OracleCheck {
        file: PathBuf,
        /// Single cut; every bipartition when omitted.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Apply a gate log (one gate per line, e.g. `F@3`, `CX@1,4`).
    Apply { file: PathBuf, gates: PathBuf },
    /// Measure a Pauli operator (outcome exponent, default 0).
    Measure {
        file: PathBuf,
        pauli: String,
        #[arg(long, conflicts_with = "seed")]
        outcome: Option<u32>,
        /// Draw a random outcome for non-deterministic measurements.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Chinese-remainder decomposition of a square-free-dimension tableau.
    Crt { file: PathBuf },
    /// Canonical form of a continuous-variable plane.
    CvCanon {
        file: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Trimming verdict for a continuous-variable plane.
    CvTrim {
        file: PathBuf,
        #[arg(long)]
        partition: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
