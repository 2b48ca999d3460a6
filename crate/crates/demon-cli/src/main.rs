use clap::Parser;
use demon_cli::{execute, parse_config};
use std::path::PathBuf;
use std::process::ExitCode;

/// Measurement-powered qubit engine simulator.
///
/// Reads a key=value config file and writes plot-ready CSV/JSON into the
/// output directory. Exit codes: 0 success, 2 config error, 3 runtime error.
#[derive(Parser)]
#[command(name = "demon-cycle", version, disable_help_subcommand = true)]
struct Cli {
    /// Path to the run configuration.
    config: PathBuf,

    /// Output directory; overrides the config's `out` key (default ".").
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config's master_seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read config {}: {err}", cli.config.display());
            return ExitCode::from(2);
        }
    };

    let mut config = match parse_config(&text) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    for note in config.warnings() {
        eprintln!("warning: {note}");
    }

    let out_dir = cli
        .out
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    match execute(&config, &out_dir) {
        Ok(written) => {
            for path in written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}
