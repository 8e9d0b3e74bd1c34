//! Benchmark suite runner: solves every *.cnf file in a directory and
//! writes report.json + report.csv.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use pupper::suite::{run_suite, write_report};
use pupper_cli::SolverArgs;

#[derive(Debug, Parser)]
#[command(name = "pupper-suite", about = "Run the solver over a directory of DIMACS instances")]
struct Cli {
    /// Directory containing *.cnf files.
    directory: PathBuf,

    /// Per-instance wall-clock limit in seconds.
    #[arg(long = "time-limit", default_value_t = 60.0)]
    time_limit: f64,

    /// Output directory for report.json and report.csv.
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,

    #[command(flatten)]
    solver: SolverArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let config = cli.solver.to_config();
    let report = run_suite(
        &cli.directory,
        &config,
        Duration::from_secs_f64(cli.time_limit),
    )?;
    write_report(&report, &cli.out_dir)?;
    let agg = &report.aggregates;
    println!(
        "solved {}/{} | time over solved: avg {} / median {} / max {}",
        agg.solved_count,
        report.records.len(),
        fmt_opt(agg.average_time_s),
        fmt_opt(agg.median_time_s),
        fmt_opt(agg.maximum_time_s),
    );
    println!(
        "reports written to {} and {}",
        cli.out_dir.join("report.json").display(),
        cli.out_dir.join("report.csv").display(),
    );
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}s"))
}
