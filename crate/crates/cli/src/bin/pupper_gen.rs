//! Random k-SAT instance generator for building benchmark directories.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pupper::gen::{generate_planted_ksat, generate_uniform_ksat};
use pupper::suite::write_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Parser)]
#[command(name = "pupper-gen", about = "Generate random k-SAT instances")]
struct Cli {
    /// Number of variables per instance.
    #[arg(short = 'n', long, default_value_t = 100)]
    num_vars: usize,

    /// Number of clauses per instance.
    #[arg(short = 'm', long, default_value_t = 400)]
    num_clauses: usize,

    /// Clause width.
    #[arg(short = 'k', long, default_value_t = 3)]
    width: usize,

    /// How many instances to generate.
    #[arg(long, default_value_t = 1)]
    count: usize,

    /// Plant a hidden satisfying assignment (guarantees satisfiability).
    #[arg(long)]
    planted: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.width > cli.num_vars {
        eprintln!(
            "error: clause width {} exceeds variable count {}",
            cli.width, cli.num_vars
        );
        return ExitCode::FAILURE;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    for i in 0..cli.count {
        let formula = if cli.planted {
            generate_planted_ksat(cli.num_vars, cli.num_clauses, cli.width, &mut rng).0
        } else {
            generate_uniform_ksat(cli.num_vars, cli.num_clauses, cli.width, &mut rng)
        };
        let kind = if cli.planted { "planted" } else { "uniform" };
        let name = format!(
            "{kind}_n{}_m{}_k{}_{i:03}",
            cli.num_vars, cli.num_clauses, cli.width
        );
        match write_instance(&cli.out, &name, &formula) {
            Ok(path) => println!("{}", path.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    ExitCode::SUCCESS
}
