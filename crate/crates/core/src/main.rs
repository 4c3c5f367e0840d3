use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use anxbench::app::{self, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "anxbench", version, about = "Biosignal anxiety-detection benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the evaluation matrix (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Extract one feature-matrix CSV per dataset.
    Features,
    /// Run the train/test evaluation matrix.
    Matrix,
    /// Pairwise per-feature-set OTDD between datasets.
    Similarity,
    /// Gini feature importance per dataset.
    Importance,
    /// Write synthetic cohorts as raw signal files.
    Synth,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Some(path) = &cli.config else {
        eprintln!("error: --config <path> is required");
        return ExitCode::from(1);
    };
    let result = RunConfig::load(path).and_then(|mut cfg| {
        cfg.apply(&Overrides {
            seed: cli.seed,
            out: cli.out.clone(),
            workers: cli.workers,
        });
        match cli.command {
            Command::Features => app::cmd_features(&cfg),
            Command::Matrix => app::cmd_matrix(&cfg),
            Command::Similarity => app::cmd_similarity(&cfg),
            Command::Importance => app::cmd_importance(&cfg),
            Command::Synth => app::cmd_synth(&cfg),
        }
    });
    match result {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(app::exit_code(&e) as u8)
        }
    }
}
