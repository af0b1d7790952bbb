//! `drsubmax`: run solvers, verify instances, generate instances and plot
//! trajectories.

mod config;
mod error;
mod plot;
mod run;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drsubmax::instances::{generate, GENERATED_FAMILIES};
use drsubmax::verify::{CheckOptions, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};

use config::RunConfig;
use error::{CliError, EXIT_OK};

#[derive(Parser)]
#[command(name = "drsubmax", version, about = "DR-submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solvers of a config file and write trajectories and a summary.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        /// Output directory; overrides the config's `output`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long, env = "DRSUBMAX_SEED")]
        seed: Option<u64>,
    },
    /// Run property checks on an instance and write one JSON report each.
    Verify {
        #[arg(short, long)]
        instance: PathBuf,
        /// Comma-separated check names.
        #[arg(long)]
        checks: String,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_SEED, env = "DRSUBMAX_SEED")]
        seed: u64,
    },
    /// Write a random instance file.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0, env = "DRSUBMAX_SEED")]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Plot trajectory CSVs as an SVG line chart.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, output, seed } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = output.unwrap_or_else(|| cfg.base_dir.join(&cfg.output));
            run::run(&cfg, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Verify { instance, checks, output, samples, tolerance, seed } => {
            let checks = verify_cmd::parse_checks(&checks)?;
            if samples == 0 || tolerance.is_nan() || tolerance < 0.0 {
                return Err(CliError::validation("samples must be >= 1 and tolerance >= 0"));
            }
            let opts = CheckOptions { samples, tolerance, seed };
            verify_cmd::verify(&instance, &checks, &opts, &output)
        }
        Command::Gen { family, n, seed, output } => {
            if !GENERATED_FAMILIES.contains(&family.as_str()) {
                return Err(CliError::validation(format!(
                    "unknown family `{family}`; expected one of {}",
                    GENERATED_FAMILIES.join(", ")
                )));
            }
            let inst = generate(&family, n, seed).map_err(|e| CliError::from_core("gen", e))?;
            inst.save(&output).map_err(|e| CliError::runtime(format!("{}: {e}", output.display())))?;
            Ok(())
        }
        Command::Plot { inputs, output } => plot::plot(&inputs, &output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
