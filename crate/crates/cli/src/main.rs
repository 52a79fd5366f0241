use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use commands::{eval::EvalArgs, kernels::KernelCommand, sharpness::SharpnessArgs, verify::VerifyArgs};
use error::{CliError, CliResult};

/// Evaluate the polygamma-difference family, verify complete monotonicity
/// on grids, and probe sharpness of the thresholds.
#[derive(Debug, Parser)]
#[command(name = "cmkit", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print F^(k)(x; s; c) at each --x
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Run every applicable theorem clause over a grid
    Verify(VerifyArgs),
    /// Search for a point where a perturbed threshold breaks monotonicity
    #[command(allow_negative_numbers = true)]
    Sharpness(SharpnessArgs),
    /// Kernel diagnostics
    #[command(subcommand)]
    Kernels(KernelCommand),
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("CMKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("CMKIT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Eval(e.to_string()))
}

fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    match cli.command {
        Command::Eval(args) => commands::eval::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Sharpness(args) => commands::sharpness::run(args),
        Command::Kernels(cmd) => commands::kernels::run(cmd),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on bad flags
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
