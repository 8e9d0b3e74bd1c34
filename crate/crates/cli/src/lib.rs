//! Shared argument plumbing for the `pupper` binaries.

use std::time::Duration;

use clap::{Args, ValueEnum};
use pupper::{PriorityPolicy, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    HighToLow,
    LowToHigh,
    RandomOrder,
}

impl From<PolicyArg> for PriorityPolicy {
    fn from(p: PolicyArg) -> PriorityPolicy {
        match p {
            PolicyArg::HighToLow => PriorityPolicy::HighToLow,
            PolicyArg::LowToHigh => PriorityPolicy::LowToHigh,
            PolicyArg::RandomOrder => PriorityPolicy::RandomOrder,
        }
    }
}

/// Solver flags shared by the solve and suite front ends. Defaults match
/// the reference configuration: one million iterations, resetting every 5.
#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Iteration budget (total across copies unless --budget-per-copy).
    #[arg(long = "max-iters", default_value_t = 1_000_000)]
    pub max_iters: u64,

    /// Reset the assignment to the best-so-far every N iterations.
    #[arg(long = "reset-freq", default_value_t = 5)]
    pub reset_freq: u64,

    /// EMA decay factor in [0, 1].
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,

    /// Number of independent search copies.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,

    /// Base RNG seed; per-copy seeds are derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Variable ordering policy.
    #[arg(long, value_enum, default_value_t = PolicyArg::HighToLow)]
    pub policy: PolicyArg,

    /// Disable periodic resetting.
    #[arg(long = "no-reset")]
    pub no_reset: bool,

    /// Apply the best-assignment update before the periodic reset.
    #[arg(long = "best-update-first")]
    pub best_update_first: bool,

    /// Treat --max-iters as a per-copy budget.
    #[arg(long = "budget-per-copy")]
    pub budget_per_copy: bool,

    /// Worker threads; >1 runs one thread per copy (non-deterministic
    /// winner).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,

    /// Wall-clock limit in seconds.
    #[arg(long = "timeout-secs")]
    pub timeout_secs: Option<f64>,
}

impl SolverArgs {
    pub fn to_config(&self) -> SolverConfig {
        SolverConfig {
            max_iterations: self.max_iters,
            reset_frequency: self.reset_freq,
            rho: self.rho,
            num_copies: self.copies,
            seed: self.seed,
            policy: self.policy.into(),
            resetting_enabled: !self.no_reset,
            best_update_first: self.best_update_first,
            budget_per_copy: self.budget_per_copy,
            wall_clock_limit: self.timeout_secs.map(Duration::from_secs_f64),
            threads: self.threads,
        }
    }
}
