use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use hololine_cli::output::write_table;
use hololine_cli::{run, Experiment, ExperimentConfig};

/// Runs one experiment and writes `<out>/<experiment>.csv`.
#[derive(Parser)]
#[command(name = "hololine", version)]
struct Cli {
    #[arg(value_enum)]
    experiment: Experiment,

    /// TOML experiment description.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Master seed; overrides `metrics.master_seed`.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo trials; overrides `metrics.trials`.
    #[arg(long)]
    trials: Option<usize>,

    #[arg(long)]
    quiet: bool,
}

fn execute(cli: &Cli) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&cli.config)
        .map_err(|e| anyhow::anyhow!("{}: {e}", cli.config.display()))?;
    if let Some(seed) = cli.seed {
        cfg.metrics.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        anyhow::ensure!(trials > 0, "--trials must be positive");
        cfg.metrics.trials = trials;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let report = run(cli.experiment, &cfg)?;
    let path = write_table(&out, &cli.experiment.name(), &report.table)?;
    if !cli.quiet {
        for note in &report.notes {
            eprintln!("{note}");
        }
        eprintln!(
            "wrote {} ({} rows)",
            path.display(),
            report.table.rows.len()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
