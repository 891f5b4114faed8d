use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fock_witness::cli::{dump_state, run_sweep, verify, StateConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "fock-witness", version, about = "Sweeps, dumps and self-checks for engineered Fock-space states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quantities over a parameter sweep and write CSV.
    Sweep { config: PathBuf },
    /// Run the oracle-vs-closed-form checks.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Write the Fock amplitudes of one state as CSV.
    Dump { config: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Sweep { config } => {
            let config = match SweepConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            match run_sweep(&config, &mut stdout) {
                Ok(rows) => {
                    if let Some(p) = &config.output_path {
                        eprintln!("wrote {rows} rows to {}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("write failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Verify { seed } => {
            let report = verify(seed);
            println!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Dump { config } => {
            let config = match StateConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            match dump_state(&config, &mut stdout) {
                Ok(_) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
