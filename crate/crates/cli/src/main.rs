use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand};
use muxsim_cli::{builtin, load_scenario, output_path, run_to_file, RunOptions};

#[derive(Parser)]
#[command(
    name = "muxsim",
    version,
    about = "Multiplexed heralded single-photon source simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or built-in and write a CSV table
    Run {
        /// Scenario file path or built-in name
        scenario: String,
        /// Base seed; overrides the scenario seed (default 1)
        #[arg(long)]
        seed: Option<u64>,
        /// Pulses per grid point (Monte Carlo kinds)
        #[arg(long)]
        pulses: Option<u64>,
        /// Output CSV path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Default directory for `<name>.csv`
        #[arg(long, env = "MUXSIM_OUT_DIR")]
        out_dir: Option<PathBuf>,
        /// Fock-space photon-number cutoff
        #[arg(long)]
        cutoff: Option<usize>,
        /// Worker threads for Monte Carlo; results do not depend on it
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List built-in scenarios
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        None => {
            println!("{}", Cli::command().render_help());
            println!("Built-in scenarios:\n{}", builtin::listing());
            ExitCode::SUCCESS
        }
        Some(Command::List) => {
            print!("{}", builtin::listing());
            ExitCode::SUCCESS
        }
        Some(Command::Run {
            scenario,
            seed,
            pulses,
            out,
            out_dir,
            cutoff,
            threads,
        }) => {
            let start = Instant::now();
            let options = RunOptions {
                seed,
                pulses,
                cutoff,
                threads,
            };
            let result = load_scenario(&scenario).and_then(|s| {
                let path = output_path(&s, out.as_deref(), out_dir.as_deref());
                run_to_file(&s, &options, &path)
            });
            match result {
                Ok(report) => {
                    println!(
                        "wrote {}: {} rows, seed {}, {:.2} s",
                        report.path.display(),
                        report.rows,
                        report.seed,
                        start.elapsed().as_secs_f64()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
