//! `jtd`: run switching-current experiments from a TOML file.

mod config;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, ConfigError};
use run::CliError;

#[derive(Debug, Parser)]
#[command(name = "jtd", version, about = "Josephson threshold detector simulations")]
struct Args {
    /// Experiment to run; defaults to `command` in the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// TOML experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Master seed (overrides the file).
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectories per ensemble (overrides the file).
    #[arg(long)]
    runs: Option<u64>,
    /// Output directory (overrides the file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    plot: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "JTD_THREADS")]
    threads: Option<usize>,
}

fn execute(args: Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let mut cfg = config::parse(&text)?;
    let command = match (args.command, cfg.command) {
        (Some(a), Some(b)) if a != b => {
            return Err(ConfigError::new(
                "command",
                format!("file says {}, command line says {}", b.name(), a.name()),
            )
            .into())
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(ConfigError::new("command", "not given").into()),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = args.runs {
        cfg.runs = runs;
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    cfg.plot |= args.plot;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError::new("threads", e.to_string()))?;
    }
    run::run(command, &cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
