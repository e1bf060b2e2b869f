use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use declab::{parse_config, run_config, validate, CliError, Experiment, RunOptions};

#[derive(Parser)]
#[command(name = "declab", version, about = "Run decoherence and kinetic-theory experiments from config files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write its CSV table.
    Run {
        config: PathBuf,
        /// Evaluate the experiment's acceptance checks (exit 4 on failure).
        #[arg(long)]
        check: bool,
        /// Output path, overriding the config's `output` key.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads for sweep points.
        #[arg(long, env = "DECLAB_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// List experiments with their parameters and output columns.
    ListExperiments,
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

fn list() {
    for exp in Experiment::ALL {
        println!("{}\n  {}", exp.name(), exp.description());
        for p in exp.params() {
            let default = match (p.required, p.default) {
                (true, _) => "required".to_owned(),
                (false, Some(d)) => format!("default {d}"),
                (false, None) => "optional".to_owned(),
            };
            println!("    {:<14} {:?} ({default})", p.key, p.kind);
        }
        let cols: Vec<String> = exp.columns().iter().map(|(n, u)| format!("{n}[{u}]")).collect();
        println!("  columns: {}", cols.join(","));
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, check, output, jobs } => {
            let report = run_config(&config, &RunOptions { check, output, jobs })?;
            eprintln!("wrote {} rows to {}", report.table.len(), report.output.display());
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            match report.failed_checks().count() {
                0 => Ok(()),
                n => Err(CliError::ChecksFailed(n)),
            }
        }
        Command::ListExperiments => {
            list();
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = parse_config(&config)?;
            let points = validate(&cfg)?;
            eprintln!("{}: {} ok, {points} point(s)", config.display(), cfg.experiment.name());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("declab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
