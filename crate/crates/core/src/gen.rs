//! Random k-SAT instance generators for tests and benchmark suites.

use rand::seq::index::sample;
use rand::Rng;

use crate::cnf::{Assignment, Clause, CnfFormula, Literal};
use crate::solver::random_init;

/// Uniform random k-SAT: each clause picks `k` distinct variables without
/// replacement, each polarity uniform.
pub fn generate_uniform_ksat<R: Rng>(n: usize, m: usize, k: usize, rng: &mut R) -> CnfFormula {
    assert!(k <= n, "clause width {k} exceeds variable count {n}");
    let clauses = (0..m).map(|_| random_clause(n, k, rng)).collect();
    CnfFormula::new(n, clauses)
}

/// Planted k-SAT: draws a hidden assignment first, then rejection-samples
/// clauses, discarding any the hidden assignment falsifies. The returned
/// formula is satisfiable by construction. Rejection biases the clause
/// distribution relative to uniform; fine for guaranteed-satisfiable test
/// instances.
pub fn generate_planted_ksat<R: Rng>(
    n: usize,
    m: usize,
    k: usize,
    rng: &mut R,
) -> (CnfFormula, Assignment) {
    assert!(k <= n, "clause width {k} exceeds variable count {n}");
    let hidden = random_init(n, rng);
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let clause = random_clause(n, k, rng);
        let satisfied = clause
            .literals()
            .iter()
            .any(|lit| hidden.get(lit.index()) == lit.is_positive());
        if satisfied {
            clauses.push(clause);
        }
    }
    (CnfFormula::new(n, clauses), hidden)
}

fn random_clause<R: Rng>(n: usize, k: usize, rng: &mut R) -> Clause {
    let vars = sample(rng, n, k);
    Clause::new(
        vars.iter()
            .map(|v| Literal::new(v as u32 + 1, rng.gen::<bool>()))
            .collect(),
    )
}
