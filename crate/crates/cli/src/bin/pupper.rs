//! Competition-style SAT solver front end.
//!
//! Prints `c` comment lines, then `s SATISFIABLE` with a `v` model line or
//! `s UNKNOWN`. Exit codes: 10 = satisfiable, 0 = unknown, 1 = error.
//! The solver is incomplete, so `s UNSATISFIABLE` is never printed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use pupper::{multi_copy_solve, parse_dimacs, CnfFormula, SolveOutcome, SolveStatus};
use pupper_cli::SolverArgs;

#[derive(Debug, Parser)]
#[command(name = "pupper", about = "Incomplete SAT solver (prioritized unit propagation with periodic resetting)")]
struct Cli {
    /// DIMACS CNF input file.
    input: PathBuf,

    #[command(flatten)]
    solver: SolverArgs,

    /// Accept a clause count that disagrees with the 'p cnf' header.
    #[arg(long)]
    lenient: bool,

    /// Skip re-verifying the model before printing it.
    #[arg(long = "no-verify")]
    no_verify: bool,

    /// Write a single JSON stats object to this path.
    #[arg(long = "stats-json")]
    stats_json: Option<PathBuf>,
}

const EXIT_SAT: u8 = 10;
const EXIT_UNKNOWN: u8 = 0;
const EXIT_ERROR: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let text = fs::read_to_string(&cli.input)
        .with_context(|| format!("cannot read {}", cli.input.display()))?;
    let formula = if cli.lenient {
        pupper::parse_dimacs_lenient(&text)
    } else {
        parse_dimacs(&text)
    }
    .with_context(|| format!("cannot parse {}", cli.input.display()))?;

    let config = cli.solver.to_config();
    println!(
        "c pupper: vars={} clauses={} copies={} max-iters={} reset-freq={} rho={} policy={:?} seed={} threads={}",
        formula.num_vars(),
        formula.num_clauses(),
        config.num_copies,
        config.max_iterations,
        config.reset_frequency,
        config.rho,
        config.policy,
        config.seed,
        config.threads,
    );

    let outcome = multi_copy_solve(&formula, &config);
    println!(
        "c done: iterations={} best={}/{} elapsed={:.3}s",
        outcome.iterations_used,
        outcome.best_count,
        formula.num_clauses(),
        outcome.elapsed.as_secs_f64(),
    );

    if let Some(path) = &cli.stats_json {
        write_stats(path, &formula, &config.seed, &outcome)?;
    }

    match outcome.status {
        SolveStatus::Satisfiable => {
            if !cli.no_verify {
                let (ok, _) = formula.evaluate(&outcome.assignment);
                anyhow::ensure!(ok, "internal error: model failed verification");
            }
            println!("s SATISFIABLE");
            print_model(&outcome);
            Ok(EXIT_SAT)
        }
        SolveStatus::Unknown => {
            println!("s UNKNOWN");
            Ok(EXIT_UNKNOWN)
        }
    }
}

/// Model lines per competition convention, wrapped at 4096 characters with
/// continuation `v ` prefixes.
fn print_model(outcome: &SolveOutcome) {
    const LIMIT: usize = 4096;
    let mut line = String::from("v");
    let mut tokens: Vec<String> = outcome
        .assignment
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let var = i as i64 + 1;
            (if v { var } else { -var }).to_string()
        })
        .collect();
    tokens.push("0".to_string());
    for token in tokens {
        if line.len() + 1 + token.len() > LIMIT {
            println!("{line}");
            line = String::from("v");
        }
        line.push(' ');
        line.push_str(&token);
    }
    println!("{line}");
}

fn write_stats(
    path: &std::path::Path,
    formula: &CnfFormula,
    seed: &u64,
    outcome: &SolveOutcome,
) -> anyhow::Result<()> {
    let stats = serde_json::json!({
        "schema_version": 1,
        "status": match outcome.status {
            SolveStatus::Satisfiable => "SATISFIABLE",
            SolveStatus::Unknown => "UNKNOWN",
        },
        "iterations_used": outcome.iterations_used,
        "best_count": outcome.best_count,
        "clause_count": formula.num_clauses(),
        "elapsed_seconds": outcome.elapsed.as_secs_f64(),
        "winning_copy": outcome.winning_copy,
        "seed": seed,
    });
    fs::write(path, serde_json::to_string_pretty(&stats)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
