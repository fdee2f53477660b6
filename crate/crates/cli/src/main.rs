//! grauert-lab: batch experiment runner for the Grauert tube laboratory.
//!
//! Usage: `grauert-lab <experiment> --config <path> [--seed N] [--workers N]
//! [--output <path>] [--format csv|json] [--verify <bool>]`
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 config error,
//! 3 numerical failure (flagged rows).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod experiments;
mod report;

use config::{Experiment, ExperimentConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "grauert-lab",
    about = "Verification experiments on Grauert tubes of model manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    experiment: Command,
}

#[derive(Parser)]
struct CommonArgs {
    /// Experiment configuration (strict TOML; unknown keys rejected).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel sweeps (default 1: sequential).
    #[arg(long)]
    workers: Option<usize>,
    /// Override the report destination (default: config, else stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the report format.
    #[arg(long)]
    format: Option<String>,
    /// Tolerance gating: exit nonzero on failed rows.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Tube function, conoid and flow-invariance identities.
    GeometryCheck(CommonArgs),
    /// Growth exponents of tempered spectral projections.
    Weyl(CommonArgs),
    /// Extremal function asymptotics and the coherent-state identity.
    Siciak(CommonArgs),
    /// Poisson kernels: quadrature, subordination and spectral sums.
    KernelCompare(CommonArgs),
    /// Transport recursion, conoid normalization and truncation rule.
    Hadamard(CommonArgs),
    /// Complex zeros, current pairings and random-wave ensembles.
    Zeros(CommonArgs),
    /// Fourier-coefficient decay and selection rules.
    Decay(CommonArgs),
}

impl Command {
    fn split(self) -> (Experiment, CommonArgs) {
        match self {
            Command::GeometryCheck(a) => (Experiment::GeometryCheck, a),
            Command::Weyl(a) => (Experiment::Weyl, a),
            Command::Siciak(a) => (Experiment::Siciak, a),
            Command::KernelCompare(a) => (Experiment::KernelCompare, a),
            Command::Hadamard(a) => (Experiment::Hadamard, a),
            Command::Zeros(a) => (Experiment::Zeros, a),
            Command::Decay(a) => (Experiment::Decay, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = cli.experiment.split();

    let mut cfg = match ExperimentConfig::load(&args.config, experiment) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(path) = &args.output {
        cfg.output_path = Some(path.display().to_string());
    }
    if let Some(f) = &args.format {
        match OutputFormat::parse(f) {
            Ok(f) => cfg.format = f,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        }
    }

    #[cfg(feature = "parallel")]
    {
        let workers = args.workers.unwrap_or(1);
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global()
        {
            eprintln!("thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = args.workers;

    let rows = match experiments::run(&cfg) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };

    let rendered = match cfg.format {
        OutputFormat::Csv => report::to_csv(&rows),
        OutputFormat::Json => report::to_json(&rows),
    };
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("cannot write report to {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }

    let gate = report::gate(&rows);
    let failures = rows
        .iter()
        .filter(|r| r.status != report::Status::Pass)
        .count();
    if gate != 0 {
        eprintln!("{failures} of {} checks did not pass", rows.len());
    }
    if args.verify && gate != 0 {
        ExitCode::from(gate as u8)
    } else {
        ExitCode::SUCCESS
    }
}
