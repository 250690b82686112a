//! `fdiv`: f-divergence calculus, certified truncated rejection sampling,
//! hardness witnesses, smoothed online-learning games, and mean-estimation
//! experiments, from one binary.
//!
//! Exit codes: 0 success, 1 validation error (flags, inputs, infeasible
//! configuration), 2 runtime error. Failures print a single line
//! `code=<slug>, msg=<text>` on stderr. Setting FDIV_THREADS caps the worker
//! pool (0 or unset picks the hardware default); results do not depend on it.

mod commands;
mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use report::{single_line, CliError};

#[derive(Parser)]
#[command(
    name = "fdiv",
    version,
    about = "f-divergence constrained sampling toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate D_f(ν‖μ) for a generator and two distribution files
    Div(commands::DivArgs),
    /// Tabulate sample-complexity, coupling, and regret bounds
    Complexity(commands::ComplexityArgs),
    /// Truncated rejection sampling
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Hardness witness constructions with their certified quantities
    Witness(commands::WitnessArgs),
    /// Smoothed online threshold games
    #[command(subcommand)]
    Online(OnlineCommand),
    /// Per-round coupling budget demo with exact TV verification
    Coupling(commands::CouplingArgs),
    /// Mean estimation experiments
    #[command(subcommand)]
    Estimate(EstimateCommand),
}

#[derive(Subcommand)]
enum SampleCommand {
    /// Plan truncation for each ε and verify the exact output law meets it
    Verify(commands::SampleVerifyArgs),
}

#[derive(Subcommand)]
enum OnlineCommand {
    /// Play seeded games and report per-seed regret plus an aggregate
    Run(commands::OnlineRunArgs),
}

#[derive(Subcommand)]
enum EstimateCommand {
    /// Importance vs rejection estimation across an n-grid
    Compare(commands::EstimateCompareArgs),
    /// Importance-sampling error across the e^KL sample threshold
    KlKnee(commands::EstimateKlKneeArgs),
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FDIV_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        CliError::validation(
            "domain",
            format!("FDIV_THREADS must be a nonnegative integer, got {raw:?}"),
        )
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::runtime("internal", e.to_string()))?;
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
        eprintln!("code=cli_parse, msg={}", single_line(&e.to_string()));
        std::process::exit(1);
    });
    init_threads()?;
    match &cli.command {
        Command::Div(args) => commands::div(args),
        Command::Complexity(args) => commands::complexity(args),
        Command::Sample(SampleCommand::Verify(args)) => commands::sample_verify(args),
        Command::Witness(args) => commands::witness(args),
        Command::Online(OnlineCommand::Run(args)) => commands::online_run(args),
        Command::Coupling(args) => commands::coupling(args),
        Command::Estimate(EstimateCommand::Compare(args)) => commands::estimate_compare(args),
        Command::Estimate(EstimateCommand::KlKnee(args)) => commands::estimate_kl_knee(args),
    }
}

fn main() {
    match run() {
        Ok(()) => {}
        Err(e) => {
            eprintln!("code={}, msg={}", e.code, single_line(&e.msg));
            std::process::exit(e.exit);
        }
    }
}
