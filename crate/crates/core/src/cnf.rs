//! CNF formula data model, DIMACS I/O and assignment evaluation.
//!
//! Variables are numbered 1..=n externally (DIMACS convention) and indexed
//! 0..n internally. Clause order is preserved exactly as parsed; all
//! deterministic tie-breaking elsewhere in the crate depends on it.

use std::fmt::Write as _;

use thiserror::Error;

/// A variable or its negation. `var` is 1-based, matching DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Literal {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive }
    }

    /// 1-based variable index.
    #[inline]
    pub fn var(self) -> u32 {
        self.var
    }

    /// 0-based variable index, for array access.
    #[inline]
    pub fn index(self) -> usize {
        (self.var - 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// Converts a nonzero DIMACS literal code (`k` or `-k`).
    pub fn from_dimacs(code: i64) -> Literal {
        assert!(code != 0, "DIMACS literal must be nonzero");
        Literal {
            var: code.unsigned_abs() as u32,
            positive: code > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

/// A disjunction of literals. Duplicate and tautological literals are kept
/// verbatim so that clause indices stay stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        Clause { literals }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

/// An immutable clause database: variable count plus clauses in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula, checking that every literal is in range.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> CnfFormula {
        for clause in &clauses {
            for lit in clause.literals() {
                assert!(
                    lit.index() < num_vars,
                    "literal {} out of range for {} variables",
                    lit.to_dimacs(),
                    num_vars
                );
            }
        }
        CnfFormula { num_vars, clauses }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, idx: usize) -> &Clause {
        &self.clauses[idx]
    }

    /// Evaluates a full assignment. Returns whether every clause is
    /// satisfied together with the number of satisfied clauses. Duplicate
    /// clauses count independently.
    pub fn evaluate(&self, assignment: &Assignment) -> (bool, usize) {
        assert_eq!(
            assignment.len(),
            self.num_vars,
            "assignment length must equal variable count"
        );
        let count = self
            .clauses
            .iter()
            .filter(|clause| {
                clause
                    .literals()
                    .iter()
                    .any(|lit| assignment.get(lit.index()) == lit.is_positive())
            })
            .count();
        (count == self.clauses.len(), count)
    }
}

/// A full truth-value vector, one value per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of the variable with 0-based index `idx`.
    #[inline]
    pub fn get(&self, idx: usize) -> bool {
        self.values[idx]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, value: bool) {
        self.values[idx] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// A tri-state truth-value vector; the substrate unit propagation works on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    values: Vec<Option<bool>>,
}

impl PartialAssignment {
    pub fn unassigned(num_vars: usize) -> PartialAssignment {
        PartialAssignment {
            values: vec![None; num_vars],
        }
    }

    pub fn new(values: Vec<Option<bool>>) -> PartialAssignment {
        PartialAssignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Option<bool> {
        self.values[idx]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, value: bool) {
        self.values[idx] = Some(value);
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    /// True if every variable assigned in `self` has the same value in
    /// `other`.
    pub fn is_extended_by(&self, other: &PartialAssignment) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a.is_none() || a == b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {0}: missing 'p cnf' header")]
    MissingHeader(usize),
    #[error("line {0}: duplicate 'p cnf' header")]
    DuplicateHeader(usize),
    #[error("line {0}: malformed header '{1}'")]
    MalformedHeader(usize, String),
    #[error("line {0}: non-integer token '{1}'")]
    InvalidToken(usize, String),
    #[error("line {line}: literal {literal} out of range (header declares {num_vars} variables)")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("line {0}: empty clause")]
    EmptyClause(usize),
    #[error("line {0}: clause not terminated by 0 at end of input")]
    UnterminatedClause(usize),
    #[error("header declares {expected} clauses but input contains {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
}

/// Parses DIMACS CNF, rejecting a clause count that disagrees with the
/// header.
pub fn parse_dimacs(input: &str) -> Result<CnfFormula, ParseError> {
    parse_dimacs_inner(input, true)
}

/// Like [`parse_dimacs`] but accepts the actual clause count when it
/// disagrees with the header.
pub fn parse_dimacs_lenient(input: &str) -> Result<CnfFormula, ParseError> {
    parse_dimacs_inner(input, false)
}

fn parse_dimacs_inner(input: &str, strict: bool) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    let mut done = false;

    'lines: for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // SATLIB files end with a '%' trailer; everything after it is noise.
        if trimmed.starts_with('%') {
            done = true;
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader(lineno));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(ParseError::MalformedHeader(lineno, trimmed.to_string()));
            }
            let num_vars = fields[2]
                .parse::<usize>()
                .map_err(|_| ParseError::MalformedHeader(lineno, trimmed.to_string()))?;
            let num_clauses = fields[3]
                .parse::<usize>()
                .map_err(|_| ParseError::MalformedHeader(lineno, trimmed.to_string()))?;
            header = Some((num_vars, num_clauses));
            continue;
        }
        let (num_vars, _) = header.ok_or(ParseError::MissingHeader(lineno))?;
        for token in trimmed.split_whitespace() {
            if token == "%" {
                done = true;
                break 'lines;
            }
            let code = token
                .parse::<i64>()
                .map_err(|_| ParseError::InvalidToken(lineno, token.to_string()))?;
            if code == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause(lineno));
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
            } else {
                if code.unsigned_abs() > num_vars as u64 {
                    return Err(ParseError::LiteralOutOfRange {
                        line: lineno,
                        literal: code,
                        num_vars,
                    });
                }
                current.push(Literal::from_dimacs(code));
            }
        }
    }
    let _ = done;

    let (num_vars, declared) = header.ok_or(ParseError::MissingHeader(last_line.max(1)))?;
    if !current.is_empty() {
        return Err(ParseError::UnterminatedClause(last_line));
    }
    if strict && clauses.len() != declared {
        return Err(ParseError::ClauseCountMismatch {
            expected: declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula::new(num_vars, clauses))
}

/// Writes DIMACS CNF such that `parse_dimacs(write_dimacs(f)) == f`.
pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses()).unwrap();
    for clause in formula.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
