//! Unit propagation to a fixpoint over a partial assignment.
//!
//! Two implementations are provided and must agree literal-for-literal: a
//! naive reference that rescans every clause each pass, and an indexed
//! engine built on per-literal occurrence lists with incrementally
//! maintained per-clause counters. Both follow the same deterministic
//! schedule: each pass visits unit clauses in ascending clause-index order,
//! a clause that becomes unit at or before the current position waits for
//! the next pass, and passes repeat until nothing changes.
//!
//! Conflicts are not errors. If two unit clauses force opposite values for
//! one variable, the earlier clause (by index) wins and the later one is
//! left falsified; propagation continues around it.
//!
//! A unit clause here is one with no true literal and exactly one
//! unassigned literal *occurrence*. Duplicate literals are kept verbatim by
//! the parser, so (x1 ∨ x1) under the empty assignment has two unassigned
//! occurrences and is not unit.

use std::collections::BTreeSet;

use crate::cnf::{CnfFormula, PartialAssignment};

/// Reference implementation: full clause rescan per pass.
pub fn unit_propagate_naive(
    formula: &CnfFormula,
    partial: &PartialAssignment,
) -> PartialAssignment {
    assert_eq!(
        partial.len(),
        formula.num_vars(),
        "partial assignment length must equal variable count"
    );
    let mut result = partial.clone();
    loop {
        let mut changed = false;
        for clause in formula.clauses() {
            let mut satisfied = false;
            let mut unassigned = None;
            let mut unassigned_count = 0;
            for lit in clause.literals() {
                match result.get(lit.index()) {
                    Some(v) if v == lit.is_positive() => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if !satisfied && unassigned_count == 1 {
                let lit = unassigned.unwrap();
                result.set(lit.index(), lit.is_positive());
                changed = true;
            }
        }
        if !changed {
            return result;
        }
    }
}

/// Static per-literal occurrence lists. Immutable once built; shareable
/// across search copies.
#[derive(Debug, Clone)]
pub struct OccurrenceIndex {
    /// Clause indices containing the positive literal of each variable.
    /// A clause appears once per occurrence, so duplicates are repeated.
    pos: Vec<Vec<u32>>,
    neg: Vec<Vec<u32>>,
    clause_lens: Vec<u32>,
}

impl OccurrenceIndex {
    pub fn new(formula: &CnfFormula) -> OccurrenceIndex {
        let n = formula.num_vars();
        let mut pos = vec![Vec::new(); n];
        let mut neg = vec![Vec::new(); n];
        let mut clause_lens = Vec::with_capacity(formula.num_clauses());
        for (ci, clause) in formula.clauses().iter().enumerate() {
            clause_lens.push(clause.len() as u32);
            for lit in clause.literals() {
                if lit.is_positive() {
                    pos[lit.index()].push(ci as u32);
                } else {
                    neg[lit.index()].push(ci as u32);
                }
            }
        }
        OccurrenceIndex {
            pos,
            neg,
            clause_lens,
        }
    }
}

/// Mutable propagation state over a shared formula and occurrence index.
/// Owned by a single search copy.
///
/// The per-clause counters (`satisfied`, `unassigned` occurrence count) are
/// updated incrementally on every variable assignment and always equal what
/// a full rescan would produce; `verify_counters` checks this.
pub struct Propagator<'a> {
    formula: &'a CnfFormula,
    index: &'a OccurrenceIndex,
    values: Vec<Option<bool>>,
    satisfied: Vec<bool>,
    unassigned: Vec<u32>,
    /// Unit candidates for the pass in progress (or the first pass of the
    /// next `propagate` call), in ascending clause-index order.
    current: BTreeSet<u32>,
    /// Candidates discovered at or before the in-pass position; deferred to
    /// the next pass.
    next: BTreeSet<u32>,
    /// Clause index being processed, while a pass is in progress.
    pass_pos: Option<u32>,
}

impl<'a> Propagator<'a> {
    pub fn new(formula: &'a CnfFormula, index: &'a OccurrenceIndex) -> Propagator<'a> {
        Propagator {
            formula,
            index,
            values: vec![None; formula.num_vars()],
            satisfied: vec![false; formula.num_clauses()],
            unassigned: index.clause_lens.clone(),
            current: BTreeSet::new(),
            next: BTreeSet::new(),
            pass_pos: None,
        }
    }

    /// Resets to the all-unassigned partial assignment.
    pub fn reset(&mut self) {
        self.values.fill(None);
        self.satisfied.fill(false);
        self.unassigned.copy_from_slice(&self.index.clause_lens);
        self.current.clear();
        self.next.clear();
        self.pass_pos = None;
    }

    /// Resets to the given partial assignment, recomputing clause counters
    /// and collecting the initially-unit clauses.
    pub fn reset_from(&mut self, partial: &PartialAssignment) {
        assert_eq!(partial.len(), self.formula.num_vars());
        self.reset();
        self.values.copy_from_slice(partial.values());
        for (ci, clause) in self.formula.clauses().iter().enumerate() {
            let mut sat = false;
            let mut unassigned = 0;
            for lit in clause.literals() {
                match self.values[lit.index()] {
                    Some(v) if v == lit.is_positive() => sat = true,
                    Some(_) => {}
                    None => unassigned += 1,
                }
            }
            self.satisfied[ci] = sat;
            self.unassigned[ci] = unassigned;
            if !sat && unassigned == 1 {
                self.current.insert(ci as u32);
            }
        }
    }

    #[inline]
    pub fn value(&self, var_idx: usize) -> Option<bool> {
        self.values[var_idx]
    }

    #[inline]
    pub fn is_unassigned(&self, var_idx: usize) -> bool {
        self.values[var_idx].is_none()
    }

    pub fn to_partial(&self) -> PartialAssignment {
        PartialAssignment::new(self.values.clone())
    }

    /// Assigns an unassigned variable and updates clause counters. Newly
    /// unit clauses are queued for `propagate`.
    pub fn assign(&mut self, var_idx: usize, value: bool) {
        debug_assert!(self.values[var_idx].is_none(), "variable already assigned");
        self.values[var_idx] = Some(value);
        let (sat_side, false_side) = if value {
            (&self.index.pos[var_idx], &self.index.neg[var_idx])
        } else {
            (&self.index.neg[var_idx], &self.index.pos[var_idx])
        };
        for &ci in sat_side {
            self.unassigned[ci as usize] -= 1;
            self.satisfied[ci as usize] = true;
        }
        for &ci in false_side {
            let c = ci as usize;
            self.unassigned[c] -= 1;
            if !self.satisfied[c] && self.unassigned[c] == 1 {
                // Mid-pass discoveries at or before the cursor wait for the
                // next pass, matching the naive scan order.
                match self.pass_pos {
                    Some(pos) if ci <= pos => {
                        self.next.insert(ci);
                    }
                    _ => {
                        self.current.insert(ci);
                    }
                }
            }
        }
    }

    /// Runs unit propagation to a fixpoint from the queued candidates.
    pub fn propagate(&mut self) {
        loop {
            if self.current.is_empty() {
                if self.next.is_empty() {
                    break;
                }
                std::mem::swap(&mut self.current, &mut self.next);
            }
            while let Some(ci) = self.current.pop_first() {
                let c = ci as usize;
                // Re-check: the clause may have been satisfied or falsified
                // since it was queued.
                if self.satisfied[c] || self.unassigned[c] != 1 {
                    continue;
                }
                self.pass_pos = Some(ci);
                let lit = self
                    .formula
                    .clause(c)
                    .literals()
                    .iter()
                    .find(|lit| self.values[lit.index()].is_none())
                    .expect("counter says one unassigned literal remains");
                let (idx, val) = (lit.index(), lit.is_positive());
                self.assign(idx, val);
            }
            self.pass_pos = None;
        }
        self.pass_pos = None;
    }

    /// Asserts the incremental counters against a full rescan.
    pub fn verify_counters(&self) {
        for (ci, clause) in self.formula.clauses().iter().enumerate() {
            let mut sat = false;
            let mut unassigned = 0;
            for lit in clause.literals() {
                match self.values[lit.index()] {
                    Some(v) if v == lit.is_positive() => sat = true,
                    Some(_) => {}
                    None => unassigned += 1,
                }
            }
            assert_eq!(self.satisfied[ci], sat, "satisfied flag drift, clause {ci}");
            assert_eq!(
                self.unassigned[ci], unassigned,
                "unassigned counter drift, clause {ci}"
            );
        }
    }
}

/// Indexed unit propagation over an existing occurrence index. Counters are
/// rebuilt from `partial`; no state is carried between calls.
pub fn unit_propagate_indexed(
    formula: &CnfFormula,
    index: &OccurrenceIndex,
    partial: &PartialAssignment,
) -> PartialAssignment {
    let mut prop = Propagator::new(formula, index);
    prop.reset_from(partial);
    prop.propagate();
    prop.to_partial()
}

/// Unit propagation to a fixpoint; builds a throwaway occurrence index.
pub fn unit_propagate(formula: &CnfFormula, partial: &PartialAssignment) -> PartialAssignment {
    let index = OccurrenceIndex::new(formula);
    unit_propagate_indexed(formula, &index, partial)
}
