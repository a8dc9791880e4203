use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod args;
mod bench;
mod generate;
mod input;
mod provenance;
mod solve;
mod verify;

/// Ranks genes by solving the GeneRank linear system.
#[derive(Debug, Parser)]
#[command(name = "generank", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a test network to disk as Matrix Market.
    #[command(subcommand)]
    Generate(generate::GenerateCommand),
    /// Run one solve and write the report and the ranked genes.
    Solve(solve::SolveArgs),
    /// Run every (alpha, method) pair and tabulate iterations and times.
    Bench(bench::BenchArgs),
    /// Check the spectral and M-matrix properties of the scaled operators.
    Verify(verify::VerifyArgs),
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Usage = 2,
    NotConverged = 3,
    VerificationFailed = 4,
}

/// An argument combination rejected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn error_status(err: &anyhow::Error) -> Status {
    if err.downcast_ref::<UsageError>().is_some() {
        return Status::Usage;
    }
    match err.downcast_ref::<generank_core::Error>() {
        Some(generank_core::Error::InvalidAlpha(_) | generank_core::Error::InvalidParameter(_)) => Status::Usage,
        _ => Status::Failure,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(cmd) => generate::run(cmd),
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Verify(args) => verify::run(args),
    };
    let status = match result {
        Ok(status) => status,
        Err(err) => {
            eprintln!("generank: {err:#}");
            error_status(&err)
        }
    };
    ExitCode::from(status as u8)
}
