//! Experiment runner CLI. Thin shell over `bimanip::bench`.
//!
//! Exit codes: 0 success, 2 config/IO/checkpoint errors, 3 contract or
//! domain errors, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bimanip::bench::{self, PolicySource, SweepParam};
use bimanip::error::Error;

#[derive(Parser)]
#[command(
    name = "bimanip",
    about = "Planar bimanual tactile manipulation benchmark runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn default_out() -> PathBuf {
    std::env::var_os("BIMANIP_OUT").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))
}

#[derive(Subcommand)]
enum Command {
    /// Train a policy and write checkpoint + training log.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (default: $BIMANIP_OUT/train or ./out/train).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a checkpoint or the scripted controller.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Checkpoint path; omit with --oracle to use the scripted controller.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Drive the arms with the scripted ground-truth controller.
        #[arg(long, default_value_t = false)]
        oracle: bool,
        #[arg(long, default_value_t = 20)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the four {subgoals,perturbation} gathering variants.
    AblateGum {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated seeds (at least 3).
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a subgoal hyperparameter over its documented grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Which parameter: n (point count) or h (update period).
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an episode record as trajectory polylines.
    Replay {
        /// Episode record JSON path.
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Train { config, seed, out } => {
            let out = out.unwrap_or_else(|| default_out().join("train"));
            let (ck, log) = bench::cmd_train(&config, seed, &out)?;
            println!("checkpoint: {}", ck.display());
            println!("iterations: {}", log.rows.len());
            if let Some(last) = log.rows.last() {
                println!(
                    "final mean episode length: {} (success rate {})",
                    last.mean_ep_len, last.success_rate
                );
            }
        }
        Command::Eval { config, checkpoint, oracle, episodes, seed, out } => {
            let out = out.unwrap_or_else(|| default_out().join("eval"));
            let source = match (checkpoint, oracle) {
                (Some(path), false) => PolicySource::Checkpoint(path),
                (None, true) => PolicySource::Oracle,
                (Some(_), true) => {
                    return Err(Error::contract(
                        "pass either --checkpoint or --oracle, not both",
                    ))
                }
                (None, false) => {
                    return Err(Error::contract(
                        "pass --checkpoint <path> or --oracle",
                    ))
                }
            };
            let report = bench::cmd_eval(source, &config, episodes, seed, &out)?;
            println!("{}", report.to_csv());
        }
        Command::AblateGum { config, seeds, out } => {
            let out = out.unwrap_or_else(|| default_out().join("ablate-gum"));
            let report = bench::cmd_ablate_gum(&config, &seeds, &out)?;
            for v in &report.variants {
                let mean: f64 =
                    v.final_ep_len.iter().sum::<f64>() / v.final_ep_len.len().max(1) as f64;
                println!("{}: final mean episode length {mean}", v.name);
            }
        }
        Command::Sweep { config, param, seeds, out } => {
            let out = out.unwrap_or_else(|| default_out().join("sweep"));
            let param = match param.as_str() {
                "n" => SweepParam::N,
                "h" => SweepParam::H,
                other => {
                    return Err(Error::contract(format!(
                        "unknown sweep parameter `{other}` (expected n or h)"
                    )))
                }
            };
            let report = bench::cmd_sweep(&config, param, &seeds, &out)?;
            for (value, _, mean) in &report.cells {
                let mark = if *value == report.best_value { "  <- best" } else { "" };
                println!("{}={value}: final mean episode length {mean}{mark}", report.param);
            }
        }
        Command::Replay { record, out } => {
            let out = out.unwrap_or_else(|| default_out().join("replay"));
            bench::cmd_replay(&record, &out)?;
            println!("polylines written to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Io(_) | Error::Json(_) | Error::Checkpoint(_) => {
                    ExitCode::from(2)
                }
                Error::Contract(_) | Error::Domain(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
