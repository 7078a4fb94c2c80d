//! `shadows`: vertex shadows of the hypercube from the command line.
//!
//! Each command prints one JSON record to stdout. Exit codes: 0 success,
//! 2 parse error, 3 degenerate input, 4 dimension limit, 5 I/O failure.

mod commands;
mod error;
mod input;
mod record;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::commands::{CheckArgs, ExtremalArgs, MeasureArgs, OracleArgs};
use crate::record::RunRecord;

#[derive(Debug, Parser)]
#[command(name = "shadows", version, about = "Cube vertex shadows on central hyperplane sections")]
struct Cli {
    /// Report elapsed_ms as 0 so that output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the ‖u‖₁‖u‖∞ ≤ 2 criterion for one direction.
    Check(CheckArgs),
    /// Enumerate every vertex and compare with the criterion.
    Oracle(OracleArgs),
    /// Maximum of ‖u‖₁‖u‖∞ on the sphere, per dimension.
    Extremal(ExtremalArgs),
    /// Monte Carlo statistics of ‖u‖₁‖u‖∞ over the sphere.
    Measure(MeasureArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result: Result<RunRecord, error::CliError> = match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Extremal(a) => commands::extremal(a),
        Command::Measure(a) => commands::measure(a),
    };
    match result {
        Ok(mut record) => {
            if !cli.no_timing {
                record.elapsed_ms = started.elapsed().as_millis() as u64;
            }
            println!("{}", serde_json::to_string(&record).expect("record serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("shadows: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
