use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fqnm_core::harness::{config::describe_experiments, parse_config, run_experiment, HarnessError};

#[derive(Parser)]
#[command(name = "fqnm-lab", version, about = "Integer-transfer conservation-law experiments")]
#[command(after_help = "Exit codes: 0 success, 1 config error, 2 runtime invariant breach.\n\nRun `fqnm-lab list` for experiments and their keys.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        /// `key = value` config file; `experiment` is the only required key.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print experiment names, required keys and defaults.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", describe_experiments());
            ExitCode::SUCCESS
        }
        Command::Run { config, out } => {
            let result = parse_config(&config).map_err(HarnessError::from).and_then(|mut cfg| {
                if let Some(dir) = out {
                    cfg.out_dir = dir;
                }
                run_experiment(&cfg)
            });
            match result {
                Ok(summary) => {
                    for note in &summary.notes {
                        println!("{note}");
                    }
                    for file in &summary.files {
                        println!("wrote {}", file.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("fqnm-lab: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
