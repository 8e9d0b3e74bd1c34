//! The PUPPER search loop: prioritized unit propagation as an improvement
//! operator on full assignments, periodic resetting to the best assignment
//! found, and a multi-copy scheduler.
//!
//! One iteration rebuilds the full assignment from scratch: variables are
//! seeded one at a time to their current value in variance order, running
//! unit propagation after each seed so that stable variables tend to be set
//! by propagation rather than directly. Every `reset_frequency` iterations
//! the current assignment is restored to the best one seen so far. Apart
//! from the random initialization the search is fully deterministic.
//!
//! Reproducibility: the RNG is ChaCha8 seeded from a 64-bit value. Copy `i`
//! of a multi-copy run uses the seed
//! `splitmix64(config.seed ^ (0x9E3779B97F4A7C15 * (i + 1)))`.
//! This derivation is fixed; changing it would silently change every run.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, CnfFormula};
use crate::prioritizer::{variance_ranking, EmaState};
use crate::propagation::{OccurrenceIndex, Propagator};

/// Which variable ordering each iteration uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorityPolicy {
    /// Decreasing variance (the default).
    HighToLow,
    /// Increasing variance; known-worse, kept for ablation.
    LowToHigh,
    /// A fresh uniform permutation per iteration; the "no priorities"
    /// ablation. The EMA is still updated but never consulted.
    RandomOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Iteration budget: total across copies by default, per copy when
    /// `budget_per_copy` is set. One iteration is one full rebuild of the
    /// assignment.
    pub max_iterations: u64,
    /// Reset the current assignment to the best every this many iterations.
    pub reset_frequency: u64,
    /// EMA decay factor. Unspecified upstream; 0.9 is this crate's choice.
    pub rho: f64,
    pub num_copies: usize,
    pub seed: u64,
    pub policy: PriorityPolicy,
    pub resetting_enabled: bool,
    /// Apply the best-assignment update before the periodic reset instead
    /// of after it. Off by default: the reset comes first, so improvements
    /// produced on reset iterations are discarded.
    pub best_update_first: bool,
    /// Interpret `max_iterations` as a per-copy budget.
    pub budget_per_copy: bool,
    pub wall_clock_limit: Option<Duration>,
    /// Worker threads: 1 runs copies round-robin on the calling thread,
    /// anything larger runs one thread per copy.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            max_iterations: 1_000_000,
            reset_frequency: 5,
            rho: 0.9,
            num_copies: 1,
            seed: 0,
            policy: PriorityPolicy::HighToLow,
            resetting_enabled: true,
            best_update_first: false,
            budget_per_copy: false,
            wall_clock_limit: None,
            threads: 1,
        }
    }
}

impl SolverConfig {
    fn validate(&self) {
        assert!(self.max_iterations >= 1, "max_iterations must be >= 1");
        assert!(self.reset_frequency >= 1, "reset_frequency must be >= 1");
        assert!(self.num_copies >= 1, "num_copies must be >= 1");
        assert!((0.0..=1.0).contains(&self.rho), "rho must be in [0, 1]");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Satisfiable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// The satisfying assignment, or the best one found.
    pub assignment: Assignment,
    pub best_count: usize,
    /// Iterations spent, summed over copies.
    pub iterations_used: u64,
    pub winning_copy: Option<usize>,
    pub elapsed: Duration,
}

impl SolveOutcome {
    /// Canonical text form of everything deterministic about the outcome
    /// (`elapsed` is wall-clock noise and excluded). Byte-identical across
    /// repeated single-thread runs with the same formula and config.
    pub fn fingerprint(&self) -> String {
        let bits: String = self
            .assignment
            .values()
            .iter()
            .map(|&v| if v { '1' } else { '0' })
            .collect();
        format!(
            "{:?} best={} iters={} copy={:?} assignment={}",
            self.status, self.best_count, self.iterations_used, self.winning_copy, bits
        )
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-copy seed split. Fixed; see the module docs.
pub fn derive_copy_seed(seed: u64, copy_index: usize) -> u64 {
    splitmix64(seed ^ GOLDEN_GAMMA.wrapping_mul(copy_index as u64 + 1))
}

/// Assigns each variable True with probability 1/2.
pub fn random_init<R: Rng>(num_vars: usize, rng: &mut R) -> Assignment {
    Assignment::new((0..num_vars).map(|_| rng.gen::<bool>()).collect())
}

/// One prioritized-unit-propagation step: updates `ema` from `alpha`, ranks
/// variables per the policy, then rebuilds `alpha` from the empty partial
/// assignment by seeding each still-unassigned variable to its old value
/// and propagating. The result is always a full assignment.
pub fn prioritized_unit_prop<R: Rng>(
    propagator: &mut Propagator<'_>,
    alpha: &mut Assignment,
    ema: &mut EmaState,
    policy: PriorityPolicy,
    rng: &mut R,
) {
    assert_eq!(alpha.len(), ema.len(), "assignment/ema length mismatch");
    ema.update(alpha);
    let order = match policy {
        PriorityPolicy::HighToLow => variance_ranking(ema, false),
        PriorityPolicy::LowToHigh => variance_ranking(ema, true),
        PriorityPolicy::RandomOrder => {
            let mut order: Vec<usize> = (0..alpha.len()).collect();
            // Fisher-Yates from the copy's own generator.
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            order
        }
    };
    propagator.reset();
    for &var in &order {
        if propagator.is_unassigned(var) {
            propagator.assign(var, alpha.get(var));
            propagator.propagate();
        }
    }
    for var in 0..alpha.len() {
        alpha.set(
            var,
            propagator
                .value(var)
                .expect("every variable is assigned after a full rebuild"),
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepResult {
    Continue,
    Satisfied,
}

/// One independent search trajectory: its own assignment, EMA, best-so-far
/// and RNG. The formula and occurrence index are shared and immutable.
pub struct SearchCopy<'a> {
    formula: &'a CnfFormula,
    propagator: Propagator<'a>,
    rng: ChaCha8Rng,
    alpha: Assignment,
    alpha_count: usize,
    ema: EmaState,
    best: Assignment,
    best_count: usize,
    iteration: u64,
}

impl<'a> SearchCopy<'a> {
    pub fn new(
        formula: &'a CnfFormula,
        index: &'a OccurrenceIndex,
        seed: u64,
        rho: f64,
    ) -> SearchCopy<'a> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = random_init(formula.num_vars(), &mut rng);
        let (_, alpha_count) = formula.evaluate(&alpha);
        let ema = EmaState::from_assignment(&alpha, rho);
        SearchCopy {
            formula,
            propagator: Propagator::new(formula, index),
            rng,
            best: alpha.clone(),
            best_count: alpha_count,
            alpha,
            alpha_count,
            ema,
            iteration: 0,
        }
    }

    pub fn best_count(&self) -> usize {
        self.best_count
    }

    pub fn best(&self) -> &Assignment {
        &self.best
    }

    pub fn ema(&self) -> &EmaState {
        &self.ema
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// One loop body: check the current assignment, run one prioritized
    /// propagation, apply the periodic reset and best-update bookkeeping.
    pub fn step(&mut self, config: &SolverConfig) -> StepResult {
        let num_clauses = self.formula.num_clauses();
        if self.alpha_count == num_clauses {
            // Satisfying before any work; only reachable straight from the
            // random initialization, where best == alpha.
            return StepResult::Satisfied;
        }
        self.iteration += 1;
        prioritized_unit_prop(
            &mut self.propagator,
            &mut self.alpha,
            &mut self.ema,
            config.policy,
            &mut self.rng,
        );
        self.alpha_count = self.formula.evaluate(&self.alpha).1;

        let reset_due =
            config.resetting_enabled && self.iteration.is_multiple_of(config.reset_frequency);
        if config.best_update_first {
            self.update_best();
            if reset_due {
                self.reset_to_best();
            }
        } else {
            // Reset before the best-update: an improvement produced on a
            // reset iteration is discarded.
            if reset_due {
                self.reset_to_best();
            }
            self.update_best();
        }
        debug_assert!(self.best_count == self.formula.evaluate(&self.best).1);
        if self.best_count == num_clauses {
            StepResult::Satisfied
        } else {
            StepResult::Continue
        }
    }

    fn reset_to_best(&mut self) {
        // The EMA is deliberately left alone; only the assignment resets.
        self.alpha = self.best.clone();
        self.alpha_count = self.best_count;
    }

    fn update_best(&mut self) {
        if self.alpha_count > self.best_count {
            self.best = self.alpha.clone();
            self.best_count = self.alpha_count;
        }
    }
}

/// Runs a single search copy seeded directly from `config.seed`.
pub fn pupper_solve(formula: &CnfFormula, config: &SolverConfig) -> SolveOutcome {
    config.validate();
    let start = Instant::now();
    let index = OccurrenceIndex::new(formula);
    let mut copy = SearchCopy::new(formula, &index, config.seed, config.rho);
    let satisfied = run_copy_to_budget(&mut copy, config, config.max_iterations, start, None);
    finish_single(formula, copy, satisfied, start)
}

/// Steps `copy` until it satisfies the formula, exhausts `budget`
/// iterations, or hits the wall clock / stop signal.
fn run_copy_to_budget(
    copy: &mut SearchCopy<'_>,
    config: &SolverConfig,
    budget: u64,
    start: Instant,
    stop: Option<&AtomicBool>,
) -> bool {
    loop {
        if let Some(stop) = stop {
            if stop.load(Ordering::Relaxed) {
                return false;
            }
        }
        if let Some(limit) = config.wall_clock_limit {
            if start.elapsed() >= limit {
                return false;
            }
        }
        match copy.step(config) {
            StepResult::Satisfied => return true,
            StepResult::Continue => {
                if copy.iteration >= budget {
                    return false;
                }
            }
        }
    }
}

fn finish_single(
    formula: &CnfFormula,
    copy: SearchCopy<'_>,
    satisfied: bool,
    start: Instant,
) -> SolveOutcome {
    let assignment = copy.best;
    let status = if satisfied {
        let (ok, _) = formula.evaluate(&assignment);
        assert!(ok, "satisfiable outcome failed verification");
        SolveStatus::Satisfiable
    } else {
        SolveStatus::Unknown
    };
    SolveOutcome {
        status,
        assignment,
        best_count: copy.best_count,
        iterations_used: copy.iteration,
        winning_copy: if satisfied { Some(0) } else { None },
        elapsed: start.elapsed(),
    }
}

/// Runs `config.num_copies` independent copies with per-copy derived seeds.
///
/// Single-thread mode interleaves the copies round-robin, one iteration per
/// copy per round, and is fully deterministic. Multi-thread mode runs one
/// thread per copy with a shared stop flag; the outcome is from the first
/// copy to satisfy, so the winner may vary between runs.
pub fn multi_copy_solve(formula: &CnfFormula, config: &SolverConfig) -> SolveOutcome {
    config.validate();
    if config.threads > 1 && config.num_copies > 1 {
        multi_copy_parallel(formula, config)
    } else {
        multi_copy_round_robin(formula, config)
    }
}

fn total_budget(config: &SolverConfig) -> u64 {
    if config.budget_per_copy {
        config
            .max_iterations
            .saturating_mul(config.num_copies as u64)
    } else {
        config.max_iterations
    }
}

fn multi_copy_round_robin(formula: &CnfFormula, config: &SolverConfig) -> SolveOutcome {
    let start = Instant::now();
    let index = OccurrenceIndex::new(formula);
    let mut copies: Vec<SearchCopy<'_>> = (0..config.num_copies)
        .map(|i| SearchCopy::new(formula, &index, derive_copy_seed(config.seed, i), config.rho))
        .collect();
    let budget = total_budget(config);
    let mut total_iterations: u64 = 0;
    let mut winner: Option<usize> = None;

    'rounds: loop {
        for (i, copy) in copies.iter_mut().enumerate() {
            if total_iterations >= budget {
                break 'rounds;
            }
            if let Some(limit) = config.wall_clock_limit {
                if start.elapsed() >= limit {
                    break 'rounds;
                }
            }
            let before = copy.iteration;
            let result = copy.step(config);
            total_iterations += copy.iteration - before;
            match result {
                StepResult::Satisfied => {
                    winner = Some(i);
                    break 'rounds;
                }
                StepResult::Continue => {}
            }
        }
    }

    let (best_idx, satisfied) = match winner {
        Some(i) => (i, true),
        // Highest best_count, tie broken by lowest copy index.
        None => (
            (0..copies.len())
                .max_by(|&a, &b| {
                    copies[a]
                        .best_count
                        .cmp(&copies[b].best_count)
                        .then(b.cmp(&a))
                })
                .unwrap(),
            false,
        ),
    };
    let iterations_used: u64 = copies.iter().map(|c| c.iteration).sum();
    let best = &copies[best_idx];
    let status = if satisfied {
        let (ok, _) = formula.evaluate(&best.best);
        assert!(ok, "satisfiable outcome failed verification");
        SolveStatus::Satisfiable
    } else {
        SolveStatus::Unknown
    };
    SolveOutcome {
        status,
        assignment: best.best.clone(),
        best_count: best.best_count,
        iterations_used,
        winning_copy: if satisfied { Some(best_idx) } else { None },
        elapsed: start.elapsed(),
    }
}

fn multi_copy_parallel(formula: &CnfFormula, config: &SolverConfig) -> SolveOutcome {
    let start = Instant::now();
    let stop = AtomicBool::new(false);
    // First copy to satisfy claims the winner slot and raises the stop
    // flag; everyone else drains out on the next iteration boundary.
    let winner: Mutex<Option<usize>> = Mutex::new(None);
    let k = config.num_copies as u64;
    let per_copy = |i: u64| {
        if config.budget_per_copy {
            config.max_iterations
        } else {
            config.max_iterations / k + u64::from(i < config.max_iterations % k)
        }
    };

    let results: Vec<(bool, Assignment, usize, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..config.num_copies)
            .map(|i| {
                let stop = &stop;
                let winner = &winner;
                scope.spawn(move || {
                    let index = OccurrenceIndex::new(formula);
                    let mut copy = SearchCopy::new(
                        formula,
                        &index,
                        derive_copy_seed(config.seed, i),
                        config.rho,
                    );
                    let satisfied = run_copy_to_budget(
                        &mut copy,
                        config,
                        per_copy(i as u64),
                        start,
                        Some(stop),
                    );
                    if satisfied {
                        let mut slot = winner.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(i);
                        }
                        stop.store(true, Ordering::Relaxed);
                    }
                    (satisfied, copy.best, copy.best_count, copy.iteration)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let iterations_used: u64 = results.iter().map(|r| r.3).sum();
    let winner = *winner.lock().unwrap();
    let best_idx = match winner {
        Some(i) => i,
        None => (0..results.len())
            .max_by(|&a, &b| results[a].2.cmp(&results[b].2).then(b.cmp(&a)))
            .unwrap(),
    };
    let (_, assignment, best_count, _) = results.into_iter().nth(best_idx).unwrap();
    let status = if winner.is_some() {
        let (ok, _) = formula.evaluate(&assignment);
        assert!(ok, "satisfiable outcome failed verification");
        SolveStatus::Satisfiable
    } else {
        SolveStatus::Unknown
    };
    SolveOutcome {
        status,
        assignment,
        best_count,
        iterations_used,
        winning_copy: winner,
        elapsed: start.elapsed(),
    }
}
