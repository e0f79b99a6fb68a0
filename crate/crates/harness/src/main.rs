use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crmc_harness::csv_out::format_sig9;
use crmc_harness::{
    bench_step_times, builtin, builtin_names, emit_csv, load_scenario, run_scenario, summarize,
    Algorithm, HarnessError, Result,
};

#[derive(Debug, Parser)]
#[command(
    name = "crmc",
    version,
    about = "Adaptive beamforming experiments under impulsive noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write CSV tables.
    Run {
        /// Built-in scenario name or path to a TOML scenario file.
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Output directory for the CSV tables.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated subset of algorithms to run.
        #[arg(long, value_delimiter = ',')]
        algorithms: Option<Vec<String>>,
    },
    /// Time one filter step for each algorithm.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        elements: Vec<usize>,
        #[arg(long, default_value_t = 20_000)]
        iterations: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// List the built-in scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run {
            scenario,
            seed,
            trials,
            out,
            algorithms,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(t) = trials {
                s.trials = t;
            }
            if let Some(list) = algorithms {
                s.algorithms = list
                    .iter()
                    .map(|a| Algorithm::parse(a))
                    .collect::<Result<_>>()?;
            }
            let records = run_scenario(&s)?;
            emit_csv(&records, &out)?;
            println!("scenario\talgorithm\tdiverged\tmedian_final_db\tstep_ns");
            for row in summarize(&records) {
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    row.scenario,
                    row.algorithm,
                    format_sig9(row.diverged_fraction),
                    format_sig9(row.median_final_error_db),
                    format_sig9(row.mean_step_time_ns),
                );
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Bench {
            elements,
            iterations,
            repeats,
        } => {
            if iterations == 0 {
                return Err(HarnessError::config("iterations must be at least 1"));
            }
            println!("elements\talgorithm\tstep_ns");
            for m in elements {
                for b in bench_step_times(m, iterations, repeats)? {
                    println!(
                        "{}\t{}\t{}",
                        b.elements,
                        b.algorithm,
                        format_sig9(b.mean_step_ns)
                    );
                }
            }
            Ok(())
        }
        Command::ListScenarios => {
            for name in builtin_names() {
                let s = builtin(name).expect("built-in");
                println!(
                    "{name}\t{:?}\tM={}\titerations={}\ttrials={}",
                    s.kind, s.elements, s.iterations, s.trials
                );
            }
            Ok(())
        }
    }
}
