//! Literals, clauses, CNF formulas, and partial assignments.
//!
//! Clauses are canonicalized on construction: literals are kept sorted by
//! variable, and duplicate or complementary literals are rejected rather
//! than silently merged. Formulas are sets of clauses (duplicates collapse)
//! over an explicit variable universe, so that restriction and model
//! counting agree: `count_models(F) = count(F|x=0) + count(F|x=1)` for any
//! universe variable `x`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::hypergraph::Hypergraph;

/// Hard upper limit for [`CnfFormula::count_models_with_cap`]; counts are
/// accumulated in a `u64` and assignments enumerated as bit patterns.
pub const MAX_MODEL_COUNT_VARS: u32 = 62;

/// Default variable cap for exhaustive model counting.
pub const DEFAULT_MODEL_COUNT_CAP: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("literal code 0 is reserved in DIMACS encoding")]
    ZeroLiteral,
    #[error("variable id 0 is not allowed")]
    ZeroVariable,
    #[error("duplicate literal {0} in clause")]
    DuplicateLiteral(Literal),
    #[error("clause contains both polarities of {0}")]
    ComplementaryLiterals(Var),
    #[error("clause of width {found} in a formula declared uniform of width {expected}")]
    NonUniform { expected: usize, found: usize },
    #[error("variable {0} is unassigned but occurs in the formula")]
    PartialAssignment(Var),
    #[error("variable {0} is already assigned")]
    AlreadyAssigned(Var),
    #[error("{var_count} variables exceed the model-count cap of {cap}")]
    VarCapExceeded { var_count: usize, cap: u32 },
    #[error("model-count cap {0} exceeds the supported maximum of {MAX_MODEL_COUNT_VARS}")]
    CapTooLarge(u32),
}

/// A propositional variable, identified by a positive integer id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics if `id` is zero; DIMACS ids start at 1.
    pub fn new(id: u32) -> Var {
        assert!(id >= 1, "variable ids start at 1");
        Var(id)
    }

    pub fn checked(id: u32) -> Result<Var, CnfError> {
        if id == 0 {
            Err(CnfError::ZeroVariable)
        } else {
            Ok(Var(id))
        }
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A variable or its negation.
///
/// The derived order sorts by variable first and puts the positive literal
/// before the negative one; this is the canonical literal order used for
/// clause storage and tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Var,
    negated: bool,
}

impl Literal {
    pub fn new(var: Var, negated: bool) -> Literal {
        Literal { var, negated }
    }

    pub fn positive(var: Var) -> Literal {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn negative(var: Var) -> Literal {
        Literal { var, negated: true }
    }

    /// Decodes a signed DIMACS literal: `v` is positive, `-v` negative.
    pub fn from_dimacs(code: i32) -> Result<Literal, CnfError> {
        if code == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        Ok(Literal {
            var: Var::new(code.unsigned_abs()),
            negated: code < 0,
        })
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var.id() as i32;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn complement(self) -> Literal {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Truth value under `value` for the underlying variable.
    pub fn evaluate(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals over pairwise distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Canonicalizes and validates: sorts literals, rejects duplicates and
    /// complementary pairs.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Clause, CnfError> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_unstable();
        for pair in lits.windows(2) {
            if pair[0] == pair[1] {
                return Err(CnfError::DuplicateLiteral(pair[0]));
            }
            if pair[0].var() == pair[1].var() {
                return Err(CnfError::ComplementaryLiterals(pair[0].var()));
            }
        }
        Ok(Clause { literals: lits })
    }

    pub fn from_dimacs(codes: &[i32]) -> Result<Clause, CnfError> {
        let lits = codes
            .iter()
            .map(|&c| Literal::from_dimacs(c))
            .collect::<Result<Vec<_>, _>>()?;
        Clause::new(lits)
    }

    /// The empty clause, satisfiable by no assignment.
    pub fn empty() -> Clause {
        Clause::default()
    }

    /// Internal constructor for literal sequences already known to be
    /// sorted and clash-free (restriction, resolution).
    pub(crate) fn from_sorted_unchecked(literals: Vec<Literal>) -> Clause {
        debug_assert!(literals.windows(2).all(|p| p[0].var() < p[1].var()));
        Clause { literals }
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.literals
            .binary_search_by_key(&var, |l| l.var())
            .is_ok()
    }

    /// The literal over `var`, if any.
    pub fn literal_on(&self, var: Var) -> Option<Literal> {
        self.literals
            .binary_search_by_key(&var, |l| l.var())
            .ok()
            .map(|i| self.literals[i])
    }

    /// Variables of the clause, in increasing order.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().map(|l| l.var())
    }

    /// The set of variables occurring in the clause.
    pub fn vbl(&self) -> BTreeSet<Var> {
        self.vars().collect()
    }

    /// Number of common variables with `other`; both literal slices are
    /// sorted by variable, so this is a linear merge.
    pub fn shared_vars(&self, other: &Clause) -> usize {
        merge_count(&self.literals, &other.literals, |a, b| {
            a.var().cmp(&b.var())
        })
    }

    /// Number of common literals with `other`.
    pub fn shared_literals(&self, other: &Clause) -> usize {
        merge_count(&self.literals, &other.literals, |a, b| a.cmp(b))
    }
}

fn merge_count<T: Copy>(a: &[T], b: &[T], cmp: impl Fn(&T, &T) -> core::cmp::Ordering) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match cmp(&a[i], &b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// Builds a clause from signed DIMACS codes, panicking on invalid input.
/// Intended for tests and examples: `clause![1, -2, 3]`.
#[macro_export]
macro_rules! clause {
    ($($code:expr),* $(,)?) => {
        $crate::cnf::Clause::from_dimacs(&[$($code),*]).expect("valid clause literals")
    };
}

/// A partial truth assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Fails on a repeated variable id.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Var, bool)>,
    ) -> Result<Assignment, CnfError> {
        let mut a = Assignment::new();
        for (var, value) in pairs {
            a.assign(var, value)?;
        }
        Ok(a)
    }

    pub fn assign(&mut self, var: Var, value: bool) -> Result<(), CnfError> {
        if self.map.contains_key(&var) {
            return Err(CnfError::AlreadyAssigned(var));
        }
        self.map.insert(var, value);
        Ok(())
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.map.get(&var).copied()
    }

    pub fn contains(&self, var: Var) -> bool {
        self.map.contains_key(&var)
    }

    /// Truth value of a literal, if its variable is assigned.
    pub fn value_of(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.evaluate(v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.map.iter().map(|(&v, &b)| (v, b))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    /// Union of two assignments with disjoint domains.
    pub fn union_disjoint(&self, other: &Assignment) -> Result<Assignment, CnfError> {
        let mut merged = self.clone();
        for (var, value) in other.iter() {
            merged.assign(var, value)?;
        }
        Ok(merged)
    }
}

/// Linearity is measured either on variable sets or on literal sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearityMode {
    /// Any two distinct clauses share at most `b` variables.
    Strict,
    /// Any two distinct clauses share at most `b` literals.
    Weak,
}

/// A CNF formula: a set of clauses over an explicit variable universe.
///
/// The universe always contains every variable occurring in a clause and
/// may declare additional variables; model counting quantifies over the
/// whole universe. `uniform_width` is `Some(k)` exactly when all clauses
/// have width `k` (for the empty formula it is whatever the constructor
/// declared).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    clauses: BTreeSet<Clause>,
    vars: BTreeSet<Var>,
    uniform_width: Option<usize>,
}

impl CnfFormula {
    /// Collects clauses; the universe is the union of their variables.
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> CnfFormula {
        let clauses: BTreeSet<Clause> = clauses.into_iter().collect();
        let vars: BTreeSet<Var> = clauses.iter().flat_map(|c| c.vars()).collect();
        let uniform_width = derive_uniform_width(&clauses);
        CnfFormula {
            clauses,
            vars,
            uniform_width,
        }
    }

    /// Like [`CnfFormula::new`] but validates that every clause has width
    /// `k`; an empty clause set is uniform of any declared width.
    pub fn uniform(
        clauses: impl IntoIterator<Item = Clause>,
        k: usize,
    ) -> Result<CnfFormula, CnfError> {
        let mut formula = CnfFormula::new(clauses);
        for clause in &formula.clauses {
            if clause.width() != k {
                return Err(CnfError::NonUniform {
                    expected: k,
                    found: clause.width(),
                });
            }
        }
        formula.uniform_width = Some(k);
        Ok(formula)
    }

    pub fn empty() -> CnfFormula {
        CnfFormula::new([])
    }

    /// Extends the variable universe; existing clauses are unaffected.
    pub fn declare_vars(&mut self, vars: impl IntoIterator<Item = Var>) {
        self.vars.extend(vars);
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn contains_clause(&self, clause: &Clause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.first().map(|c| c.is_empty()).unwrap_or(false)
    }

    /// The variable universe (the formula's `vbl`).
    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn max_var_id(&self) -> u32 {
        self.vars.last().map(|v| v.id()).unwrap_or(0)
    }

    /// `Some(k)` iff every clause has width `k`.
    pub fn uniform_width(&self) -> Option<usize> {
        self.uniform_width
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(|c| c.width()).max().unwrap_or(0)
    }

    /// Tests whether all distinct clause pairs share at most `b` variables
    /// (strict mode) or at most `b` literals (weak mode).
    pub fn linearity(&self, b: usize, mode: LinearityMode) -> bool {
        self.linearity_violation(b, mode).is_none()
    }

    /// First clause pair violating the linearity level, in canonical order.
    pub fn linearity_violation(&self, b: usize, mode: LinearityMode) -> Option<(&Clause, &Clause)> {
        let clauses: Vec<&Clause> = self.clauses.iter().collect();
        for i in 0..clauses.len() {
            for j in (i + 1)..clauses.len() {
                let shared = match mode {
                    LinearityMode::Strict => clauses[i].shared_vars(clauses[j]),
                    LinearityMode::Weak => clauses[i].shared_literals(clauses[j]),
                };
                if shared > b {
                    return Some((clauses[i], clauses[j]));
                }
            }
        }
        None
    }

    /// Fixes variables per `assignment`: satisfied clauses are dropped and
    /// falsified literals removed (a fully falsified clause stays as the
    /// empty clause). Assigned variables leave the universe; all other ids
    /// are preserved.
    pub fn restrict(&self, assignment: &Assignment) -> CnfFormula {
        let mut clauses = BTreeSet::new();
        'clauses: for clause in &self.clauses {
            let mut kept = Vec::with_capacity(clause.width());
            for &lit in clause.literals() {
                match assignment.value_of(lit) {
                    Some(true) => continue 'clauses,
                    Some(false) => {}
                    None => kept.push(lit),
                }
            }
            clauses.insert(Clause::from_sorted_unchecked(kept));
        }
        let vars: BTreeSet<Var> = self
            .vars
            .iter()
            .copied()
            .filter(|v| !assignment.contains(*v))
            .collect();
        let uniform_width = derive_uniform_width(&clauses);
        CnfFormula {
            clauses,
            vars,
            uniform_width,
        }
    }

    /// Evaluates under an assignment covering the whole universe.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool, CnfError> {
        for &var in &self.vars {
            if !assignment.contains(var) {
                return Err(CnfError::PartialAssignment(var));
            }
        }
        Ok(self.clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|&l| assignment.value_of(l) == Some(true))
        }))
    }

    /// Exhaustive model count over the universe, default cap.
    pub fn count_models(&self) -> Result<u64, CnfError> {
        self.count_models_with_cap(DEFAULT_MODEL_COUNT_CAP)
    }

    pub fn count_models_with_cap(&self, cap: u32) -> Result<u64, CnfError> {
        Ok(self.count_models_detailed(cap)?.0)
    }

    /// Model count plus a witness: the first satisfying assignment in the
    /// enumeration order, if any.
    pub fn count_models_detailed(&self, cap: u32) -> Result<(u64, Option<Assignment>), CnfError> {
        if cap > MAX_MODEL_COUNT_VARS {
            return Err(CnfError::CapTooLarge(cap));
        }
        let n = self.vars.len();
        if n as u64 > cap as u64 {
            return Err(CnfError::VarCapExceeded { var_count: n, cap });
        }
        let order: Vec<Var> = self.vars.iter().copied().collect();
        let position: BTreeMap<Var, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        // Bitmask per clause: variables mapped to bit positions.
        let masks: Vec<(u64, u64)> = self
            .clauses
            .iter()
            .map(|clause| {
                let (mut pos, mut neg) = (0u64, 0u64);
                for &lit in clause.literals() {
                    let bit = 1u64 << position[&lit.var()];
                    if lit.is_negated() {
                        neg |= bit;
                    } else {
                        pos |= bit;
                    }
                }
                (pos, neg)
            })
            .collect();
        let mut count = 0u64;
        let mut witness: Option<u64> = None;
        let total: u64 = 1u64 << n;
        'assignments: for bits in 0..total {
            for &(pos, neg) in &masks {
                if pos & bits == 0 && neg & !bits == 0 {
                    continue 'assignments;
                }
            }
            count += 1;
            if witness.is_none() {
                witness = Some(bits);
            }
        }
        let witness = witness.map(|bits| {
            Assignment::from_pairs(
                order
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, bits >> i & 1 == 1)),
            )
            .expect("enumeration order has distinct variables")
        });
        Ok((count, witness))
    }

    /// One-pass degree statistics; the width parameter for the
    /// (k-1)-clause degree defaults to the uniform width (or the maximum
    /// clause width for non-uniform formulas).
    pub fn degree_stats(&self) -> DegreeStats {
        let k = self.uniform_width.unwrap_or_else(|| self.max_width());
        self.degree_stats_for_width(k)
    }

    /// Degree statistics with an explicit reference width `k`, as needed
    /// when analyzing restrictions of a k-CNF formula.
    pub fn degree_stats_for_width(&self, k: usize) -> DegreeStats {
        let mut occurrences: BTreeMap<Literal, u32> = BTreeMap::new();
        let mut k_minus_1: BTreeMap<Var, u32> = BTreeMap::new();
        for clause in &self.clauses {
            let narrow = k >= 1 && clause.width() == k - 1;
            for &lit in clause.literals() {
                *occurrences.entry(lit).or_insert(0) += 1;
                if narrow {
                    *k_minus_1.entry(lit.var()).or_insert(0) += 1;
                }
            }
        }
        let mut degrees: BTreeMap<Var, u32> = BTreeMap::new();
        for (&lit, &occ) in &occurrences {
            *degrees.entry(lit.var()).or_insert(0) += occ;
        }
        let max_degree = degrees.values().copied().max().unwrap_or(0);
        let max_occurrence = occurrences.values().copied().max().unwrap_or(0);
        DegreeStats {
            degrees,
            occurrences,
            max_degree,
            max_occurrence,
            width_reference: k,
            k_minus_1,
        }
    }

    /// The hypergraph with one vertex per distinct literal and one edge per
    /// clause. Requires a uniform formula; for weakly linear input the
    /// result is a linear hypergraph.
    pub fn literal_hypergraph(&self) -> Result<Hypergraph, CnfError> {
        let k = match self.uniform_width {
            Some(k) => k,
            None => {
                let found = self.max_width();
                return Err(CnfError::NonUniform {
                    expected: self.clauses.first().map(|c| c.width()).unwrap_or(0),
                    found,
                });
            }
        };
        let literals: BTreeSet<Literal> = self
            .clauses
            .iter()
            .flat_map(|c| c.literals().iter().copied())
            .collect();
        let index: BTreeMap<Literal, u32> = literals
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        let edges: Vec<Vec<u32>> = self
            .clauses
            .iter()
            .map(|c| c.literals().iter().map(|l| index[l]).collect())
            .collect();
        let h = Hypergraph::new(literals.len() as u32, k, edges)
            .expect("clause literals are distinct and indexed in range");
        Ok(h)
    }

    /// Compacts variable ids to `1..=n` in increasing order of the old ids;
    /// returns the renumbered formula and the old-to-new map.
    pub fn renumbered(&self) -> (CnfFormula, BTreeMap<Var, Var>) {
        let mapping: BTreeMap<Var, Var> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, Var::new(i as u32 + 1)))
            .collect();
        let clauses: BTreeSet<Clause> = self
            .clauses
            .iter()
            .map(|c| {
                Clause::new(
                    c.literals()
                        .iter()
                        .map(|l| Literal::new(mapping[&l.var()], l.is_negated())),
                )
                .expect("renumbering preserves distinctness")
            })
            .collect();
        let vars: BTreeSet<Var> = mapping.values().copied().collect();
        let uniform_width = self.uniform_width;
        (
            CnfFormula {
                clauses,
                vars,
                uniform_width,
            },
            mapping,
        )
    }
}

fn derive_uniform_width(clauses: &BTreeSet<Clause>) -> Option<usize> {
    let mut widths = clauses.iter().map(|c| c.width());
    let first = widths.next()?;
    if widths.all(|w| w == first) {
        Some(first)
    } else {
        None
    }
}

impl FromIterator<Clause> for CnfFormula {
    fn from_iter<T: IntoIterator<Item = Clause>>(iter: T) -> Self {
        CnfFormula::new(iter)
    }
}

/// Degree statistics of a formula: variable degrees, literal occurrence
/// counts, their maxima, and the number of (k-1)-width clauses per
/// variable for a reference width `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    degrees: BTreeMap<Var, u32>,
    occurrences: BTreeMap<Literal, u32>,
    max_degree: u32,
    max_occurrence: u32,
    width_reference: usize,
    k_minus_1: BTreeMap<Var, u32>,
}

impl DegreeStats {
    /// Number of clauses containing the variable in either polarity.
    pub fn degree(&self, var: Var) -> u32 {
        self.degrees.get(&var).copied().unwrap_or(0)
    }

    /// Number of clauses containing this exact literal.
    pub fn occurrence(&self, lit: Literal) -> u32 {
        self.occurrences.get(&lit).copied().unwrap_or(0)
    }

    /// Maximum variable degree `d(F)`.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Maximum literal occurrence `occ(F)`.
    pub fn max_occurrence(&self) -> u32 {
        self.max_occurrence
    }

    /// Number of clauses of width `k - 1` containing the variable, where
    /// `k` is the reference width this statistic was computed for.
    pub fn k_minus_1_degree(&self, var: Var) -> u32 {
        self.k_minus_1.get(&var).copied().unwrap_or(0)
    }

    pub fn max_k_minus_1_degree(&self) -> u32 {
        self.k_minus_1.values().copied().max().unwrap_or(0)
    }

    pub fn width_reference(&self) -> usize {
        self.width_reference
    }

    pub fn degrees(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.degrees.iter().map(|(&v, &d)| (v, d))
    }

    pub fn occurrences(&self) -> impl Iterator<Item = (Literal, u32)> + '_ {
        self.occurrences.iter().map(|(&l, &o)| (l, o))
    }

    /// Sum of all literal occurrences, which must equal the sum of clause
    /// widths.
    pub fn total_occurrences(&self) -> u64 {
        self.occurrences.values().map(|&o| o as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(clauses.iter().map(|c| Clause::from_dimacs(c).unwrap()))
    }

    #[test]
    fn literal_complement_is_involutive() {
        let lit = Literal::from_dimacs(-7).unwrap();
        assert_eq!(lit.complement().complement(), lit);
        assert_eq!(lit.complement().to_dimacs(), 7);
    }

    #[test]
    fn clause_rejects_duplicates_and_clashes() {
        assert_eq!(
            Clause::from_dimacs(&[1, 1]),
            Err(CnfError::DuplicateLiteral(Literal::from_dimacs(1).unwrap()))
        );
        assert_eq!(
            Clause::from_dimacs(&[1, -1]),
            Err(CnfError::ComplementaryLiterals(Var::new(1)))
        );
        assert_eq!(Clause::from_dimacs(&[2, 0]), Err(CnfError::ZeroLiteral));
    }

    #[test]
    fn clause_canonicalizes_order() {
        let c = clause![3, -1, 2];
        let codes: Vec<i32> = c.literals().iter().map(|l| l.to_dimacs()).collect();
        assert_eq!(codes, [-1, 2, 3]);
    }

    #[test]
    fn vbl_matches_definition() {
        assert_eq!(
            clause![-1, 2].vbl(),
            BTreeSet::from([Var::new(1), Var::new(2)])
        );
        assert!(Clause::empty().vbl().is_empty());
        assert_eq!(
            clause![1, 2, -3].vbl(),
            BTreeSet::from([Var::new(1), Var::new(2), Var::new(3)])
        );
        assert_eq!(clause![1, 2, -3].vbl().len(), clause![1, 2, -3].width());
    }

    #[test]
    fn linearity_examples() {
        // Linear chain of 2-clauses.
        let linear = formula(&[&[-1, 2], &[-2, 3], &[3, 4], &[-4, -1]]);
        assert!(linear.linearity(1, LinearityMode::Strict));
        assert!(linear.linearity(1, LinearityMode::Weak));

        // Weakly linear but not linear.
        let weak = formula(&[&[-1, 2], &[1, 2], &[2, 3]]);
        assert!(weak.linearity(1, LinearityMode::Weak));
        assert!(!weak.linearity(1, LinearityMode::Strict));
        let (c, d) = weak.linearity_violation(1, LinearityMode::Strict).unwrap();
        assert_eq!(c.shared_vars(d), 2);

        // Not even weakly linear.
        let not_weak = formula(&[&[1, 2, 3], &[1, 2, -3]]);
        assert!(!not_weak.linearity(1, LinearityMode::Weak));
        assert!(not_weak.linearity(2, LinearityMode::Weak));
    }

    #[test]
    fn strict_implies_weak_and_monotone_in_b() {
        let formulas = [
            formula(&[&[-1, 2], &[-2, 3], &[3, 4]]),
            formula(&[&[1, 2, 3], &[1, 2, -3], &[4, 5, 6]]),
            formula(&[&[1], &[-1]]),
        ];
        for f in &formulas {
            for b in 1..=3 {
                if f.linearity(b, LinearityMode::Strict) {
                    assert!(f.linearity(b, LinearityMode::Weak));
                }
                if f.linearity(b, LinearityMode::Strict) {
                    assert!(f.linearity(b + 1, LinearityMode::Strict));
                }
                if f.linearity(b, LinearityMode::Weak) {
                    assert!(f.linearity(b + 1, LinearityMode::Weak));
                }
            }
        }
    }

    #[test]
    fn restrict_drops_satisfied_and_shrinks_falsified() {
        let f = formula(&[&[1, 2]]);
        let sat = f.restrict(&Assignment::from_pairs([(Var::new(1), true)]).unwrap());
        assert_eq!(sat.clause_count(), 0);
        assert_eq!(sat.vars().len(), 1); // x2 stays in the universe

        let shrunk = f.restrict(&Assignment::from_pairs([(Var::new(1), false)]).unwrap());
        assert_eq!(shrunk.clause_count(), 1);
        assert!(shrunk.contains_clause(&clause![2]));

        let unit = formula(&[&[1]]);
        let falsified = unit.restrict(&Assignment::from_pairs([(Var::new(1), false)]).unwrap());
        assert!(falsified.has_empty_clause());
    }

    #[test]
    fn restrict_is_order_independent() {
        let f = formula(&[&[1, 2, 3], &[-1, -2], &[2, -3]]);
        let a = Assignment::from_pairs([(Var::new(1), true)]).unwrap();
        let b = Assignment::from_pairs([(Var::new(3), false)]).unwrap();
        let ab = a.union_disjoint(&b).unwrap();
        assert_eq!(f.restrict(&ab), f.restrict(&a).restrict(&b));
        assert_eq!(f.restrict(&ab), f.restrict(&b).restrict(&a));
    }

    #[test]
    fn evaluate_requires_total_assignment() {
        let f = formula(&[&[1, 2]]);
        let partial = Assignment::from_pairs([(Var::new(1), false)]).unwrap();
        assert_eq!(
            f.evaluate(&partial),
            Err(CnfError::PartialAssignment(Var::new(2)))
        );
        let total = Assignment::from_pairs([(Var::new(1), false), (Var::new(2), true)]).unwrap();
        assert_eq!(f.evaluate(&total), Ok(true));

        let contradiction = formula(&[&[1], &[-1]]);
        let any = Assignment::from_pairs([(Var::new(1), true)]).unwrap();
        assert_eq!(contradiction.evaluate(&any), Ok(false));

        assert_eq!(CnfFormula::empty().evaluate(&Assignment::new()), Ok(true));
    }

    #[test]
    fn count_models_basics() {
        // Complete 2-CNF over {x1, x2} is unsatisfiable.
        let complete2 = formula(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert_eq!(complete2.count_models().unwrap(), 0);

        // A single width-k clause over n = k variables has 2^k - 1 models.
        for k in 1..=6u32 {
            let codes: Vec<i32> = (1..=k as i32).collect();
            let f = formula(&[&codes]);
            assert_eq!(f.count_models().unwrap(), (1u64 << k) - 1);
        }

        // Empty formula over three declared variables.
        let mut empty = CnfFormula::empty();
        empty.declare_vars([Var::new(1), Var::new(2), Var::new(3)]);
        assert_eq!(empty.count_models().unwrap(), 8);

        // The empty clause admits no model.
        let contradiction = CnfFormula::new([Clause::empty()]);
        assert_eq!(contradiction.count_models().unwrap(), 0);
    }

    #[test]
    fn count_models_cap_errors() {
        let mut f = CnfFormula::empty();
        f.declare_vars((1..=30).map(Var::new));
        assert_eq!(
            f.count_models(),
            Err(CnfError::VarCapExceeded {
                var_count: 30,
                cap: DEFAULT_MODEL_COUNT_CAP
            })
        );
        assert_eq!(f.count_models_with_cap(63), Err(CnfError::CapTooLarge(63)));
        assert!(f.count_models_with_cap(30).is_ok());
    }

    #[test]
    fn count_models_witness_satisfies() {
        let f = formula(&[&[1, 2], &[-1, 3], &[-3, -2]]);
        let (count, witness) = f.count_models_detailed(10).unwrap();
        assert!(count > 0);
        assert_eq!(f.evaluate(&witness.unwrap()), Ok(true));
    }

    #[test]
    fn degree_stats_fields_and_invariants() {
        let f = formula(&[&[1, 2], &[-1, 3]]);
        let stats = f.degree_stats();
        let x1 = Var::new(1);
        assert_eq!(stats.occurrence(Literal::positive(x1)), 1);
        assert_eq!(stats.occurrence(Literal::negative(x1)), 1);
        assert_eq!(stats.degree(x1), 2);
        assert_eq!(stats.max_degree(), 2);
        // d_F(x) = occ(x) + occ(~x) for every variable.
        for (v, d) in stats.degrees() {
            assert_eq!(
                d,
                stats.occurrence(Literal::positive(v)) + stats.occurrence(Literal::negative(v))
            );
        }
        // Sum of occurrences equals the sum of clause widths.
        let width_sum: u64 = f.clauses().map(|c| c.width() as u64).sum();
        assert_eq!(stats.total_occurrences(), width_sum);
        // A uniform formula has no (k-1)-clauses.
        assert_eq!(stats.max_k_minus_1_degree(), 0);
    }

    #[test]
    fn literal_hypergraph_counts_and_linearity() {
        let f = formula(&[&[1, 2], &[-1, 3]]);
        let h = f.literal_hypergraph().unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge_count(), 2);

        // Weakly linear formula gives a linear hypergraph.
        let weak = formula(&[&[-1, 2], &[1, 2], &[2, 3]]);
        assert!(weak.linearity(1, LinearityMode::Weak));
        assert!(weak.literal_hypergraph().unwrap().is_linear());

        // Duplicate clauses collapse before edges are formed.
        let dup = CnfFormula::new([clause![1, 2], clause![1, 2]]);
        assert_eq!(dup.literal_hypergraph().unwrap().edge_count(), 1);

        let nonuniform = formula(&[&[1, 2], &[3]]);
        assert!(matches!(
            nonuniform.literal_hypergraph(),
            Err(CnfError::NonUniform { .. })
        ));
    }

    #[test]
    fn renumbering_compacts_ids() {
        let f = formula(&[&[5, -9], &[9, 12]]);
        let (compact, mapping) = f.renumbered();
        assert_eq!(compact.max_var_id(), 3);
        assert_eq!(mapping[&Var::new(5)], Var::new(1));
        assert_eq!(mapping[&Var::new(9)], Var::new(2));
        assert_eq!(mapping[&Var::new(12)], Var::new(3));
        assert!(compact.contains_clause(&clause![1, -2]));
        assert!(compact.contains_clause(&clause![2, 3]));
    }

    #[test]
    fn uniform_width_is_derived() {
        let f = formula(&[&[1, 2], &[3, 4]]);
        assert_eq!(f.uniform_width(), Some(2));
        let g = formula(&[&[1, 2], &[3]]);
        assert_eq!(g.uniform_width(), None);
        let declared = CnfFormula::uniform([clause![1, 2, 3]], 3).unwrap();
        assert_eq!(declared.uniform_width(), Some(3));
        assert!(CnfFormula::uniform([clause![1, 2]], 3).is_err());
    }
}
