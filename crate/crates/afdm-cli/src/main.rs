//! `afdm` — experiment driver for the AFDM simulation library.
//!
//! Every run subcommand reads a config file, executes one experiment and
//! writes CSV results plus a `run.cfg` sidecar into the output directory.
//! The sidecar is itself a valid config with the effective seed baked in,
//! so rerunning it reproduces the outputs byte for byte.
//!
//! Exit codes: 0 success, 1 invalid usage or config, 2 runtime failure.

mod config;
mod output;
mod run;

use clap::{Args, Parser, Subcommand};
use config::ExperimentKind;
use run::Failure;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "afdm", version, about = "AFDM radar/communication experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if absent).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Ambiguity-function cuts or surfaces of the pilot waveform.
    Ambiguity(RunArgs),
    /// Pilot sounding through a target channel: range profile and CFAR
    /// detections per SNR point.
    RangeProfile(RunArgs),
    /// Monte-Carlo bit error rate sweep over waveforms.
    Ber(RunArgs),
    /// Complex-multiplication counts of the range estimators across frame
    /// sizes.
    Complexity(RunArgs),
    /// Digest of a result CSV produced by another subcommand.
    Summarize {
        /// CSV file to summarize.
        csv: PathBuf,
    },
}

type Runner = fn(&config::ExperimentConfig, u64, &std::path::Path) -> Result<Vec<String>, Failure>;

fn execute(command: Command) -> Result<(), Failure> {
    let (args, allowed, runner): (RunArgs, &[ExperimentKind], Runner) = match command {
        Command::Summarize { csv } => {
            print!("{}", run::summarize(&csv)?);
            return Ok(());
        }
        Command::Ambiguity(args) => (
            args,
            &[
                ExperimentKind::AmbiguityCut,
                ExperimentKind::AmbiguitySurface,
            ],
            run::run_ambiguity,
        ),
        Command::RangeProfile(args) => (
            args,
            &[ExperimentKind::RangeProfile],
            run::run_range_profile,
        ),
        Command::Ber(args) => (args, &[ExperimentKind::Ber], run::run_ber),
        Command::Complexity(args) => (args, &[ExperimentKind::Complexity], run::run_complexity),
    };
    let cfg = run::load_config(&args.config, allowed)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::Runtime(e.to_string()))?;
    let written = runner(&cfg, seed, &args.out)?;
    for name in written {
        println!("wrote {}", args.out.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests succeed; bad usage is a validation error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
