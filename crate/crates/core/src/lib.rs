//! An incomplete SAT solver built around prioritized unit propagation with
//! periodic resetting.
//!
//! The solver iteratively rebuilds full assignments by unit propagation
//! under a variance-based variable ordering and periodically resets the
//! working assignment to the best one found. It can certify satisfiability
//! by exhibiting a model but never unsatisfiability.

pub mod cnf;
pub mod gen;
pub mod prioritizer;
pub mod propagation;
pub mod solver;
pub mod suite;

pub use cnf::{
    parse_dimacs, parse_dimacs_lenient, write_dimacs, Assignment, Clause, CnfFormula, Literal,
    ParseError, PartialAssignment,
};
pub use solver::{
    multi_copy_solve, pupper_solve, PriorityPolicy, SolveOutcome, SolveStatus, SolverConfig,
};
