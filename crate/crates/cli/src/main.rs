//! `rcs`: ingest VNA sweeps, fit and evaluate unified RCS models, simulate
//! target channels and render reports.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{canonical, eval, fit, ingest, report, simulate, synth};

#[derive(Parser)]
#[command(
    name = "rcs",
    version,
    about = "Unified RCS modeling and ISAC target-channel toolkit"
)]
struct Cli {
    /// Seed for every random draw in the run.
    #[arg(long, global = true, default_value_t = rcs_core::sim::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a directory of S21 sweeps into an RCS dataset CSV.
    Ingest(ingest::Args),
    /// Fit the unified model to an RCS dataset.
    Fit(fit::Args),
    /// Evaluate σ(f, φ) of a model on an azimuth grid.
    Eval(eval::Args),
    /// Run the Monte Carlo target-channel simulation.
    Simulate(simulate::Args),
    /// Tabulate the canonical-shape RCS oracles.
    ValidateCanonical(canonical::Args),
    /// Render SVG plots from fit or simulate outputs.
    Report(report::Args),
    /// Generate synthetic datasets or S21 sweeps from a model.
    Synthesize(synth::Args),
}

/// 2 for input/format problems, 3 for numerical or fit failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<rcs_core::Error>() {
        Some(e) if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest::run(a, cli.seed),
        Command::Fit(a) => fit::run(a, cli.seed),
        Command::Eval(a) => eval::run(a, cli.seed),
        Command::Simulate(a) => simulate::run(a, cli.seed),
        Command::ValidateCanonical(a) => canonical::run(a, cli.seed),
        Command::Report(a) => report::run(a, cli.seed),
        Command::Synthesize(a) => synth::run(a, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
