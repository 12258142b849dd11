//! Command-line front end: train experiments, verify gradient estimators
//! against exact references, summarise result directories, and inspect
//! network shapes without training.

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use coagent::harness::{self, ExperimentConfig};
use coagent::oracle::verify::run_verification;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "coagent", version, about = "Coagent network training and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a training experiment described by a config file.
    Train {
        /// Path to a flat key-value config file.
        #[arg(long)]
        config: PathBuf,
        /// Override the number of trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the config's `out`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare gradient estimators against exact enumeration and finite
    /// differences on randomized small instances.
    VerifyGradients {
        /// Randomized instances per verification mode.
        #[arg(long, default_value_t = 5)]
        seeds: usize,
    },
    /// Summarise the trial CSVs in a directory.
    Summarize {
        /// Directory containing trial_*.csv files.
        #[arg(long = "in")]
        input: PathBuf,
        /// Moving-average window for the final statistics.
        #[arg(long, default_value_t = 1000)]
        window: usize,
    },
    /// Parse a config, build the network, report its shape, and exit.
    DryRun {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Train {
            config,
            trials,
            seed,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out_dir = out
                .or_else(|| cfg.out.clone().map(PathBuf::from))
                .context("no output directory: pass --out or set out in the config")?;
            let output = harness::run_experiment(&cfg, &out_dir)?;
            print!("{}", harness::render_summary(&output.summary.stats));
            println!("results: {}", output.dir.display());
        }
        Command::VerifyGradients { seeds } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let outcomes = run_verification(seeds)?;
            println!(
                "{:<24} {:>14} {:>12} {:>8}",
                "case", "max_rel_err", "tolerance", "result"
            );
            let mut failures = 0;
            for o in &outcomes {
                println!(
                    "{:<24} {:>14.3e} {:>12.0e} {:>8}",
                    o.case,
                    o.max_rel_err,
                    o.tolerance,
                    if o.passed { "pass" } else { "FAIL" }
                );
                if !o.passed {
                    failures += 1;
                }
            }
            println!("{} cases, {} failed", outcomes.len(), failures);
            if failures > 0 {
                bail!("{failures} verification case(s) failed");
            }
        }
        Command::Summarize { input, window } => {
            let results = harness::read_results_dir(&input)?;
            let summary = harness::summarize(&results, window)?;
            print!("{}", harness::render_summary(&summary.stats));
        }
        Command::DryRun { config } => {
            let cfg = ExperimentConfig::from_file(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            let (topology, _) = harness::build_topology(&cfg)?;
            let m = topology.m();
            let hidden = m - topology.action_coagents;
            println!(
                "environment: {}",
                cfg.environment.as_deref().unwrap_or("(none)")
            );
            println!("coagents: {m}");
            if hidden > 0 {
                println!(
                    "hidden: {hidden} coagents x {} parameters",
                    topology.coagents[0].param_count()
                );
            }
            println!(
                "action: {} coagents x {} parameters",
                topology.action_coagents,
                topology.coagents[m - 1].param_count()
            );
            println!("non-unique parameters: {}", topology.n_non_unique());
            println!("unique parameters: {}", topology.n_unique());
        }
    }
    Ok(())
}
