use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sofic_rank::lab::{self, Overrides};

/// Exact sofic rank experiments.
///
/// Exit status: 0 when every verdict passes, 1 when any fails, 2 on a
/// configuration or input error. Caps can be raised through
/// SOFICLAB_MAX_POINTS, SOFICLAB_MAX_TERMS and SOFICLAB_MAX_BALL.
#[derive(Parser)]
#[command(name = "soficlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its results under the output directory.
    Run {
        config: PathBuf,
        /// Replaces the seed given in the document.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Parse and validate an experiment without running it.
    Check {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the summary of a finished run.
    Report { run_dir: PathBuf },
}

const CONFIG_ERROR: u8 = 2;

fn load(path: &PathBuf, seed: Option<u64>) -> Result<lab::Experiment, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    lab::load(&text, &Overrides::from_env(seed)).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { config, seed } => match load(&config, seed) {
            Ok(e) => {
                println!("ok {} ({} sets, checks: {})", e.hash, e.sets().len(), checks(&e));
                ExitCode::SUCCESS
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(CONFIG_ERROR)
            }
        },
        Command::Run { config, seed, out } => {
            let e = match load(&config, seed) {
                Ok(e) => e,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            let record = match lab::run(&e) {
                Ok(r) => r,
                Err(err) => {
                    eprintln!("error: {err}");
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            let dir = match lab::persist(&e, &record, &out) {
                Ok(d) => d,
                Err(err) => {
                    eprintln!("error: {err}");
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            print!("{}", lab::summary_text(&record));
            println!("written to {}", dir.display());
            if record.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Report { run_dir } => match lab::read_run(&run_dir) {
            Ok(r) => {
                print!("{}", r.summary);
                if r.failures == 0 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => {
                eprintln!("error: {}: {err}", run_dir.display());
                ExitCode::from(CONFIG_ERROR)
            }
        },
    }
}

fn checks(e: &lab::Experiment) -> String {
    e.checks.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
}
