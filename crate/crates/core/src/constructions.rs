//! Generators for unsatisfiable linear formulas and dense linear
//! hypergraphs.
//!
//! Three routes to unsatisfiable linear k-CNF formulas live here:
//!
//! 1. the complete formula over k variables (unsatisfiable, not linear,
//!    the base case of everything),
//! 2. a recursive product construction whose clause count obeys
//!    `|F_0| = 1`, `|F_(k+1)| = |F_k| * 2^|F_k|` (tower growth; capped),
//! 3. random signing of a dense linear hypergraph built from Vandermonde
//!    systems over GF(q), retried until unsatisfiability is verified.
//!
//! All randomness is ChaCha12 seeded explicitly; equal seeds reproduce
//! equal outputs bit for bit.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::cnf::{Assignment, Clause, CnfFormula, Literal, Var};
use crate::exact::Capped;
use crate::galois::{choose_q, FieldElement, FieldSpec, GaloisError, GaussianOutcome};
use crate::hypergraph::Hypergraph;
use crate::resolution::{check_tree, dpll_refute, DpllConfig, DpllOutcome, ResolutionTree};

/// Default recursion cap for [`recursive_unsat_linear`]; level 4 already
/// needs 2048 * 2^2048 clauses.
pub const DEFAULT_RECURSION_CAP: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("variable ids must be pairwise distinct")]
    DuplicateVariables,
    #[error(
        "level {k} exceeds the cap {cap}: the next formula already needs m * 2^m clauses with {}",
        factor_display(projected_factor)
    )]
    RecursionCapExceeded {
        k: u32,
        cap: u32,
        /// Clause count m of the last level under the cap; the next level
        /// has m * 2^m clauses.
        projected_factor: Capped<BigUint>,
    },
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error("field order {q} is smaller than the uniformity {k}")]
    QSmallerThanK { q: u64, k: usize },
    #[error("uniformity {k} must be at least 2")]
    UniformityTooSmall { k: usize },
    #[error("intersection bound b = {b} must satisfy 1 <= b <= k - 2 (k = {k})")]
    BOutOfRange { b: usize, k: usize },
}

fn factor_display(factor: &Capped<BigUint>) -> alloc::string::String {
    use alloc::format;
    match factor {
        Capped::Value(m) if m.bits() <= 64 => format!("m = {m}"),
        Capped::Value(m) => format!("m of {} bits", m.bits()),
        Capped::Overflow { bits_needed } => format!("m beyond 2^{bits_needed}"),
    }
}

/// The complete formula over the given variables: all `2^k` sign patterns
/// of one clause per pattern. Unsatisfiable, with every variable of
/// degree `2^k`.
pub fn complete_kcnf(vars: &[Var]) -> Result<CnfFormula, ConstructionError> {
    let distinct: BTreeSet<Var> = vars.iter().copied().collect();
    if distinct.len() != vars.len() {
        return Err(ConstructionError::DuplicateVariables);
    }
    let k = vars.len();
    assert!(k < 30, "complete formula beyond desk scale");
    let mut clauses = Vec::with_capacity(1 << k);
    for pattern in 0u32..(1 << k) {
        let clause = Clause::new(
            vars.iter()
                .enumerate()
                .map(|(i, &v)| Literal::new(v, pattern >> i & 1 == 1)),
        )
        .expect("distinct variables cannot clash");
        clauses.push(clause);
    }
    let formula = CnfFormula::uniform(clauses, k).expect("all clauses have width k");
    debug_assert_eq!(formula.clause_count(), 1 << k);
    Ok(formula)
}

/// Clause counts of the recursive construction: 1, 2, 8, 2048, ...
pub fn recursive_sizes(levels: u32) -> Vec<Capped<BigUint>> {
    let mut sizes = Vec::with_capacity(levels as usize + 1);
    let mut current = Capped::Value(BigUint::one());
    for _ in 0..=levels {
        sizes.push(current.clone());
        current = match &current {
            Capped::Value(m) => match u64::try_from(m) {
                // |F_{k+1}| = |F_k| * 2^|F_k|
                Ok(m_small) if m_small <= 1 << 20 => Capped::Value(m << m_small as usize),
                _ => Capped::Overflow {
                    bits_needed: crate::exact::saturating_u64(m),
                },
            },
            Capped::Overflow { bits_needed } => Capped::Overflow {
                bits_needed: *bits_needed,
            },
        };
    }
    sizes
}

/// Recursive unsatisfiable linear k-CNF formula with the default cap.
pub fn recursive_unsat_linear(k: u32) -> Result<CnfFormula, ConstructionError> {
    recursive_unsat_linear_capped(k, DEFAULT_RECURSION_CAP)
}

/// Level 0 is the single empty clause. To lift level k with m clauses:
/// take m fresh shared variables, the complete m-CNF over them with
/// clauses `D_1..D_(2^m)` in canonical order, and `2^m` variable-disjoint
/// copies of level k; copy i receives the j-th literal of `D_i` into its
/// j-th clause. Shared variables get ids `1..=m` and copy i occupies the
/// contiguous id block after them, so linearity audits by range are
/// trivial.
pub fn recursive_unsat_linear_capped(k: u32, cap: u32) -> Result<CnfFormula, ConstructionError> {
    if k > cap {
        let sizes = recursive_sizes(cap.min(k - 1));
        return Err(ConstructionError::RecursionCapExceeded {
            k,
            cap,
            projected_factor: sizes.last().expect("at least one level").clone(),
        });
    }
    let mut formula = CnfFormula::new([Clause::empty()]);
    for _ in 0..k {
        formula = lift_one_level(&formula);
    }
    Ok(formula)
}

fn lift_one_level(formula: &CnfFormula) -> CnfFormula {
    let m = formula.clause_count();
    let vars_per_copy = formula.var_count() as u32;
    let shared: Vec<Var> = (1..=m as u32).map(Var::new).collect();
    let selector = complete_kcnf(&shared).expect("fresh distinct variables");

    let mut lifted: Vec<Clause> = Vec::with_capacity(m << m);
    for (i, selector_clause) in selector.clauses().enumerate() {
        let offset = m as u32 + i as u32 * vars_per_copy;
        for (j, clause) in formula.clauses().enumerate() {
            let mut literals: Vec<Literal> = clause
                .literals()
                .iter()
                .map(|l| Literal::new(Var::new(l.var().id() + offset), l.is_negated()))
                .collect();
            literals.push(selector_clause.literals()[j]);
            lifted.push(Clause::new(literals).expect("disjoint variable ranges"));
        }
    }
    let next = CnfFormula::new(lifted);
    // Clause collisions would be a generator bug; the count is exact.
    assert_eq!(next.clause_count(), m << m);
    next
}

/// Precomputed powers of the canonical evaluation points of GF(q): entry
/// `[i][j]` is the i-th point raised to the j-th power.
fn point_powers(
    field: &FieldSpec,
    k: usize,
    rows: usize,
) -> Result<Vec<Vec<FieldElement>>, GaloisError> {
    let mut table = Vec::with_capacity(k);
    for i in 0..k {
        let point = field.element(i as u64)?;
        let mut powers = Vec::with_capacity(rows);
        let mut acc = field.one();
        for _ in 0..rows {
            powers.push(acc.clone());
            acc = field.mul(&acc, &point)?;
        }
        table.push(powers);
    }
    Ok(table)
}

/// Dense linear k-uniform hypergraph over GF(q): kq vertices in k parts of
/// size q, and q^2 edges, one for each free choice in the first two parts
/// with the rest solved from a homogeneous Vandermonde system. Any two
/// vertices from distinct parts lie in exactly one common edge (for
/// k >= 3).
pub fn kuzjurin_hypergraph(k: usize, q: u64) -> Result<Hypergraph, ConstructionError> {
    vandermonde_hypergraph(k, q, 1)
}

/// Generalization with 1 + b free parts and q^(1+b) edges; any b + 1
/// vertices from pairwise distinct parts lie in exactly one common edge,
/// so the hypergraph is b-linear. `b = 1` recovers
/// [`kuzjurin_hypergraph`].
pub fn b_linear_hypergraph(k: usize, q: u64, b: usize) -> Result<Hypergraph, ConstructionError> {
    if b < 1 || b > k.saturating_sub(2) {
        return Err(ConstructionError::BOutOfRange { b, k });
    }
    vandermonde_hypergraph(k, q, b)
}

fn vandermonde_hypergraph(k: usize, q: u64, b: usize) -> Result<Hypergraph, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::UniformityTooSmall { k });
    }
    if (q as u128) < k as u128 {
        return Err(ConstructionError::QSmallerThanK { q, k });
    }
    let field = FieldSpec::new(q)?;
    let free = b + 1;
    let rows = k - free; // unknowns x_(free)..x_(k-1), one equation each
    let powers = point_powers(&field, k, rows.max(1))?;

    let vertex_count = (k as u64 * q) as u32;
    let mut edges: Vec<Vec<u32>> = Vec::with_capacity(pow_u64(q, free as u32) as usize);
    let mut free_indices = alloc::vec![0u64; free];
    loop {
        let edge = solve_edge(&field, &powers, k, q, rows, &free_indices)?;
        edges.push(edge);
        // Odometer over the free coordinates.
        let mut pos = 0;
        loop {
            if pos == free {
                break;
            }
            free_indices[pos] += 1;
            if free_indices[pos] < q {
                break;
            }
            free_indices[pos] = 0;
            pos += 1;
        }
        if pos == free {
            break;
        }
    }
    let expected = pow_u64(q, free as u32) as usize;
    let h = Hypergraph::new(vertex_count, k, edges).expect("edge vertices lie in their parts");
    assert_eq!(h.edge_count(), expected, "free choices give distinct edges");
    debug_assert!(h.satisfies_linear_edge_limit() || b > 1);
    Ok(h)
}

#[allow(clippy::needless_range_loop)] // row index j is the power in the system
fn solve_edge(
    field: &FieldSpec,
    powers: &[Vec<FieldElement>],
    k: usize,
    q: u64,
    rows: usize,
    free_indices: &[u64],
) -> Result<Vec<u32>, ConstructionError> {
    let free = free_indices.len();
    let free_elems: Vec<FieldElement> = free_indices
        .iter()
        .map(|&i| field.element(i))
        .collect::<Result<_, _>>()?;

    let mut edge: Vec<u32> = Vec::with_capacity(k);
    for (part, &idx) in free_indices.iter().enumerate() {
        edge.push((part as u64 * q + idx) as u32);
    }
    if rows > 0 {
        // Row j: sum over all parts of point_i^j * x_i = 0; move the free
        // terms to the right-hand side.
        let mut matrix = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        for j in 0..rows {
            let row: Vec<FieldElement> = (free..k).map(|i| powers[i][j].clone()).collect();
            let mut acc = field.zero();
            for (i, x) in free_elems.iter().enumerate() {
                let term = field.mul(&powers[i][j], x)?;
                acc = field.add(&acc, &term)?;
            }
            matrix.push(row);
            rhs.push(field.neg(&acc)?);
        }
        match field.gaussian_solve(&matrix, &rhs)? {
            GaussianOutcome::Solution(xs) => {
                for (offset, x) in xs.iter().enumerate() {
                    let part = (free + offset) as u64;
                    let idx = field.index_of(x)?;
                    edge.push((part * q + idx) as u32);
                }
            }
            GaussianOutcome::Singular => {
                unreachable!("Vandermonde system on distinct points is never singular")
            }
        }
    }
    Ok(edge)
}

fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp)
        .expect("edge count fits in u64 at desk scale")
}

/// Signs each hypergraph edge into a clause: vertex `v` becomes variable
/// `v + 1`, and each literal is independently negated with probability
/// 1/2. Draw order is edges in canonical order, vertices ascending within
/// an edge, one boolean per literal from ChaCha12 seeded with `seed`.
pub fn random_signing(h: &Hypergraph, seed: u64) -> CnfFormula {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let clauses: Vec<Clause> = h
        .edges()
        .map(|edge| {
            Clause::new(
                edge.iter()
                    .map(|&v| Literal::new(Var::new(v + 1), rng.gen::<bool>())),
            )
            .expect("edge vertices are distinct")
        })
        .collect();
    let mut formula = CnfFormula::new(clauses);
    formula.declare_vars((1..=h.vertex_count()).map(Var::new));
    formula
}

/// Base-2 logarithm of the expected model count of a random signing:
/// `n + m * log2(1 - 2^-k)` for n variables, m clauses of width k. A
/// negative value certifies that the expectation is below one.
pub fn expected_models_log2(n: u64, m: u64, k: u32) -> f64 {
    let loss = libm::log1p(-libm::exp2(-(k as f64))) / core::f64::consts::LN_2;
    n as f64 + m as f64 * loss
}

/// True when m/n >= 2^k, the density at which random signing is expected
/// to produce an unsatisfiable formula.
pub fn signing_density_sufficient(h: &Hypergraph) -> bool {
    let n = h.vertex_count() as u128;
    let m = h.edge_count() as u128;
    let k = h.uniformity() as u32;
    n == 0 || m >= n << k
}

/// How a signing trial was decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    /// Unsatisfiability proved by exhaustive count or a checked tree.
    UnsatVerified(VerificationMethod),
    /// A satisfying assignment was found.
    Sat(Assignment),
    /// The decision budget ran out before a verdict.
    Unverified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMethod {
    ModelCount,
    DpllRefutation,
}

/// Record of one signing trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigningTrial {
    pub seed: u64,
    pub trial_index: u32,
    pub outcome: TrialOutcome,
    /// Exact model count when the exhaustive counter ran.
    pub models_found: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct SigningConfig {
    pub base_seed: u64,
    pub max_trials: u32,
    /// Variable cap below which exhaustive counting verifies a trial.
    pub model_count_cap: u32,
    /// Decision budget for DPLL verification above the cap.
    pub decision_budget: u64,
}

impl Default for SigningConfig {
    fn default() -> Self {
        SigningConfig {
            base_seed: 42,
            max_trials: 64,
            model_count_cap: crate::cnf::DEFAULT_MODEL_COUNT_CAP,
            decision_budget: 1_000_000,
        }
    }
}

/// A verified-unsatisfiable signing, with the trial that produced it and
/// the refutation tree when DPLL was the verifier.
#[derive(Debug, Clone)]
pub struct SigningSuccess {
    pub formula: CnfFormula,
    pub trial: SigningTrial,
    pub tree: Option<ResolutionTree>,
    /// Failed trials before the successful one, for the transcript.
    pub prior_trials: Vec<SigningTrial>,
}

/// All trials failed; the per-trial outcomes are preserved.
#[derive(Debug, Clone, Error)]
#[error("no verified-unsatisfiable signing within {} trials", trials.len())]
pub struct SigningExhausted {
    pub trials: Vec<SigningTrial>,
}

/// Samples signings with seeds `base_seed + index` until one is verified
/// unsatisfiable. Verification escalates from exhaustive counting (within
/// the variable cap) to budgeted DPLL refutation with a checked tree; a
/// trial that exhausts the budget is recorded as unverified, never as
/// unsatisfiable.
pub fn search_unsat_signing(
    h: &Hypergraph,
    config: &SigningConfig,
) -> Result<SigningSuccess, SigningExhausted> {
    let mut trials = Vec::new();
    for trial_index in 0..config.max_trials {
        let seed = config.base_seed.wrapping_add(trial_index as u64);
        let formula = random_signing(h, seed);
        let (outcome, models_found, tree) = verify_trial(&formula, config);
        let trial = SigningTrial {
            seed,
            trial_index,
            outcome,
            models_found,
        };
        if matches!(trial.outcome, TrialOutcome::UnsatVerified(_)) {
            return Ok(SigningSuccess {
                formula,
                trial,
                tree,
                prior_trials: trials,
            });
        }
        trials.push(trial);
    }
    Err(SigningExhausted { trials })
}

fn verify_trial(
    formula: &CnfFormula,
    config: &SigningConfig,
) -> (TrialOutcome, Option<u64>, Option<ResolutionTree>) {
    let cap = config.model_count_cap.min(crate::cnf::MAX_MODEL_COUNT_VARS);
    if formula.var_count() as u64 <= cap as u64 {
        let (count, witness) = formula
            .count_models_detailed(cap)
            .expect("cap clamped to the supported maximum");
        if count == 0 {
            return (
                TrialOutcome::UnsatVerified(VerificationMethod::ModelCount),
                Some(0),
                None,
            );
        }
        return (
            TrialOutcome::Sat(witness.expect("positive count has a witness")),
            Some(count),
            None,
        );
    }
    let dpll_config = DpllConfig {
        decision_budget: config.decision_budget,
        ..DpllConfig::default()
    };
    match dpll_refute(formula, &dpll_config) {
        DpllOutcome::Unsat { tree, .. } => {
            let report = check_tree(&tree, formula).expect("emitted trees are well formed");
            assert!(report.valid, "emitted refutation must check out");
            (
                TrialOutcome::UnsatVerified(VerificationMethod::DpllRefutation),
                None,
                Some(tree),
            )
        }
        DpllOutcome::Sat { model } => (TrialOutcome::Sat(model), None, None),
        DpllOutcome::BudgetExceeded { .. } => (TrialOutcome::Unverified, None, None),
    }
}

/// Random linear k-uniform hypergraph on n vertices by rejection: sample
/// k-subsets and keep those reusing no vertex pair, until `target_edges`
/// edges are placed or the attempt budget runs out. Deterministic per
/// seed. Used to generate varied weakly linear test instances.
pub fn random_linear_hypergraph(n: u32, k: usize, target_edges: usize, seed: u64) -> Hypergraph {
    assert!(k >= 2 && n as usize >= k);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut used_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut attempts = 0u32;
    let attempt_budget = (target_edges as u32).saturating_mul(100).max(1000);
    while edges.len() < target_edges && attempts < attempt_budget {
        attempts += 1;
        let mut verts = BTreeSet::new();
        while verts.len() < k {
            verts.insert(rng.gen_range(0..n));
        }
        let edge: Vec<u32> = verts.into_iter().collect();
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                pairs.push((edge[i], edge[j]));
            }
        }
        if pairs.iter().any(|p| used_pairs.contains(p)) {
            continue;
        }
        used_pairs.extend(pairs);
        edges.push(edge);
    }
    Hypergraph::new(n, k, edges).expect("sampled edges are valid")
}

/// Upper-bound pipeline arithmetic: the hypergraph chosen for width k has
/// q^2 <= 4 k^2 4^k edges, without materializing it.
pub fn upper_bound_edge_count(k: u32) -> (u64, BigUint) {
    let q = choose_q(k, 1);
    let q_squared = BigUint::from(q) * q;
    (q, q_squared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::LinearityMode;

    #[test]
    fn complete_kcnf_shapes() {
        let k0 = complete_kcnf(&[]).unwrap();
        assert_eq!(k0.clause_count(), 1);
        assert!(k0.has_empty_clause());

        let vars: Vec<Var> = (1..=2).map(Var::new).collect();
        let k2 = complete_kcnf(&vars).unwrap();
        assert_eq!(k2.clause_count(), 4);
        assert_eq!(k2.count_models().unwrap(), 0);

        let vars: Vec<Var> = (1..=3).map(Var::new).collect();
        let k3 = complete_kcnf(&vars).unwrap();
        assert_eq!(k3.clause_count(), 8);
        let stats = k3.degree_stats();
        for v in &vars {
            assert_eq!(stats.degree(*v), 8);
        }

        assert_eq!(
            complete_kcnf(&[Var::new(1), Var::new(1)]),
            Err(ConstructionError::DuplicateVariables)
        );
    }

    #[test]
    fn recursive_sizes_follow_recurrence() {
        let sizes = recursive_sizes(4);
        let expect = [1u64, 2, 8, 2048];
        for (size, want) in sizes.iter().zip(expect) {
            assert_eq!(size.value(), Some(&BigUint::from(want)));
        }
        // Level 4: 2048 * 2^2048.
        let level4 = sizes[4].value().unwrap();
        assert_eq!(level4, &(BigUint::from(2048u32) << 2048));
    }

    #[test]
    fn recursive_construction_levels() {
        let f0 = recursive_unsat_linear(0).unwrap();
        assert_eq!(f0.clause_count(), 1);
        assert!(f0.has_empty_clause());

        let f1 = recursive_unsat_linear(1).unwrap();
        assert_eq!(f1.clause_count(), 2);
        assert_eq!(f1.var_count(), 1);
        assert_eq!(f1.count_models().unwrap(), 0);

        let f2 = recursive_unsat_linear(2).unwrap();
        assert_eq!(f2.clause_count(), 8);
        assert_eq!(f2.var_count(), 6);
        assert_eq!(f2.uniform_width(), Some(2));
        assert!(f2.linearity(1, LinearityMode::Strict));
        assert_eq!(f2.count_models().unwrap(), 0);
    }

    #[test]
    fn recursive_cap_reports_projection() {
        let err = recursive_unsat_linear(4).unwrap_err();
        match err {
            ConstructionError::RecursionCapExceeded {
                k: 4,
                cap: 3,
                projected_factor,
            } => {
                // Level 4 would need 2048 * 2^2048 clauses.
                assert_eq!(projected_factor.value(), Some(&BigUint::from(2048u32)));
            }
            other => panic!("unexpected error {other:?}"),
        }
        // One level further the factor is already astronomical.
        let err = recursive_unsat_linear_capped(6, 4).unwrap_err();
        match err {
            ConstructionError::RecursionCapExceeded {
                projected_factor, ..
            } => {
                assert!(projected_factor.value().unwrap().bits() > 2000);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn copies_force_their_selector_clause() {
        // In the lift of F_1 to F_2: any assignment satisfying an
        // augmented copy also satisfies the selector clause it came from.
        let f1 = recursive_unsat_linear(1).unwrap();
        let m = f1.clause_count();
        let shared: Vec<Var> = (1..=m as u32).map(Var::new).collect();
        let selector = complete_kcnf(&shared).unwrap();
        let f2 = recursive_unsat_linear(2).unwrap();

        for (i, d) in selector.clauses().enumerate() {
            // Copy i of F_1 lives on variable m + i + 1.
            let copy_var = Var::new((m + i + 1) as u32);
            let copy_clauses: Vec<&Clause> =
                f2.clauses().filter(|c| c.contains_var(copy_var)).collect();
            assert_eq!(copy_clauses.len(), m);
            // Enumerate assignments over the copy variable and the shared
            // variables.
            for bits in 0u32..(1 << (m + 1)) {
                let mut pairs = alloc::vec![(copy_var, bits & 1 == 1)];
                for (j, &s) in shared.iter().enumerate() {
                    pairs.push((s, bits >> (j + 1) & 1 == 1));
                }
                let assignment = Assignment::from_pairs(pairs).unwrap();
                let copy_satisfied = copy_clauses.iter().all(|c| {
                    c.literals()
                        .iter()
                        .any(|&l| assignment.value_of(l) == Some(true))
                });
                let selector_satisfied = d
                    .literals()
                    .iter()
                    .any(|&l| assignment.value_of(l) == Some(true));
                if copy_satisfied {
                    assert!(selector_satisfied);
                }
            }
        }
    }

    #[test]
    fn kuzjurin_counts_and_linearity() {
        let h = kuzjurin_hypergraph(3, 5).unwrap();
        assert_eq!(h.vertex_count(), 15);
        assert_eq!(h.edge_count(), 25);
        assert!(h.is_linear());
        assert!(h.satisfies_linear_edge_limit());

        // k = 2: no equations, all cross pairs.
        let h2 = kuzjurin_hypergraph(2, 3).unwrap();
        assert_eq!(h2.vertex_count(), 6);
        assert_eq!(h2.edge_count(), 9);
        assert!(h2.is_linear());
    }

    #[test]
    fn kuzjurin_cross_pairs_covered_once() {
        let k = 4usize;
        let q = 5u64;
        let h = kuzjurin_hypergraph(k, q).unwrap();
        let part_of = |v: u32| (v as u64 / q) as usize;
        for u in 0..h.vertex_count() {
            for v in (u + 1)..h.vertex_count() {
                let covering = h
                    .edges()
                    .filter(|e| e.contains(&u) && e.contains(&v))
                    .count();
                if part_of(u) == part_of(v) {
                    assert_eq!(covering, 0, "within-part pair {u},{v}");
                } else {
                    assert_eq!(covering, 1, "cross pair {u},{v}");
                }
            }
        }
    }

    #[test]
    fn kuzjurin_rejects_bad_parameters() {
        assert!(matches!(
            kuzjurin_hypergraph(3, 6),
            Err(ConstructionError::Galois(GaloisError::NotAPrimePower(6)))
        ));
        assert!(matches!(
            kuzjurin_hypergraph(5, 3),
            Err(ConstructionError::QSmallerThanK { q: 3, k: 5 })
        ));
        assert!(matches!(
            kuzjurin_hypergraph(1, 5),
            Err(ConstructionError::UniformityTooSmall { k: 1 })
        ));
    }

    #[test]
    fn b_linear_counts_and_reduction() {
        let h = b_linear_hypergraph(4, 5, 2).unwrap();
        assert_eq!(h.vertex_count(), 20);
        assert_eq!(h.edge_count(), 125);
        assert!(h.is_b_linear(2));

        // b = 1 coincides with the base construction.
        let a = kuzjurin_hypergraph(4, 7).unwrap();
        let b = b_linear_hypergraph(4, 7, 1).unwrap();
        assert_eq!(a, b);

        assert!(matches!(
            b_linear_hypergraph(4, 5, 3),
            Err(ConstructionError::BOutOfRange { b: 3, k: 4 })
        ));
    }

    #[test]
    fn b_linear_tuples_covered_once() {
        let (k, q, b) = (4usize, 5u64, 2usize);
        let h = b_linear_hypergraph(k, q, b).unwrap();
        let part_of = |v: u32| (v as u64 / q) as usize;
        // Every (b+1)-tuple from pairwise distinct parts is in exactly one
        // edge.
        let verts: Vec<u32> = (0..h.vertex_count()).collect();
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                for l in (j + 1)..verts.len() {
                    let (u, v, w) = (verts[i], verts[j], verts[l]);
                    let parts = [part_of(u), part_of(v), part_of(w)];
                    let distinct =
                        parts[0] != parts[1] && parts[0] != parts[2] && parts[1] != parts[2];
                    let covering = h
                        .edges()
                        .filter(|e| e.contains(&u) && e.contains(&v) && e.contains(&w))
                        .count();
                    if distinct {
                        assert_eq!(covering, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn random_signing_shape_and_determinism() {
        let h = Hypergraph::new(2, 2, [alloc::vec![0, 1]]).unwrap();
        let f = random_signing(&h, 7);
        assert_eq!(f.clause_count(), 1);
        assert_eq!(f.var_count(), 2);
        let clause = f.clauses().next().unwrap();
        assert_eq!(clause.vbl(), BTreeSet::from([Var::new(1), Var::new(2)]));
        assert_eq!(random_signing(&h, 7), f);
        // Different seeds eventually differ.
        let other = (0..64).map(|s| random_signing(&h, s)).any(|g| g != f);
        assert!(other);
    }

    #[test]
    fn signing_of_linear_hypergraph_is_linear_formula() {
        let h = kuzjurin_hypergraph(3, 5).unwrap();
        let f = random_signing(&h, 3);
        assert!(f.linearity(1, LinearityMode::Strict));
        assert!(f.linearity(1, LinearityMode::Weak));
    }

    #[test]
    fn expected_models_log2_values() {
        // 16 + 64 * log2(3/4) = -10.562399953846...
        let v = expected_models_log2(16, 64, 2);
        assert!((v + 10.562399953846).abs() < 1e-9);
        assert_eq!(expected_models_log2(10, 0, 3), 10.0);
        // m/n = 2^k exactly forces a negative logarithm.
        for k in 1..=6u32 {
            let n = 8u64;
            let m = n << k;
            assert!(expected_models_log2(n, m, k) < 0.0);
        }
    }

    #[test]
    fn search_finds_verified_unsat_at_density() {
        let h = kuzjurin_hypergraph(2, 8).unwrap();
        assert!(signing_density_sufficient(&h));
        let config = SigningConfig {
            base_seed: 11,
            ..SigningConfig::default()
        };
        let success = search_unsat_signing(&h, &config).unwrap();
        assert_eq!(success.formula.count_models().unwrap(), 0);
        assert!(matches!(
            success.trial.outcome,
            TrialOutcome::UnsatVerified(VerificationMethod::ModelCount)
        ));
        assert_eq!(success.trial.models_found, Some(0));
    }

    #[test]
    fn search_exhausts_on_single_clause() {
        let h = Hypergraph::new(2, 2, [alloc::vec![0, 1]]).unwrap();
        let err = search_unsat_signing(
            &h,
            &SigningConfig {
                max_trials: 8,
                ..SigningConfig::default()
            },
        )
        .unwrap_err();
        assert_eq!(err.trials.len(), 8);
        for trial in &err.trials {
            assert!(matches!(trial.outcome, TrialOutcome::Sat(_)));
        }
    }

    #[test]
    fn search_transcript_replays() {
        let h = kuzjurin_hypergraph(2, 8).unwrap();
        let config = SigningConfig {
            base_seed: 99,
            ..SigningConfig::default()
        };
        let a = search_unsat_signing(&h, &config).unwrap();
        let b = search_unsat_signing(&h, &config).unwrap();
        assert_eq!(a.formula, b.formula);
        assert_eq!(a.trial, b.trial);
    }

    #[test]
    fn random_linear_hypergraph_is_linear() {
        for seed in 0..5 {
            let h = random_linear_hypergraph(20, 3, 12, seed);
            assert!(h.is_linear());
            assert!(h.edge_count() > 0);
            assert_eq!(random_linear_hypergraph(20, 3, 12, seed), h);
        }
    }

    #[test]
    fn upper_bound_pipeline_arithmetic() {
        for k in 1..=16u32 {
            let (q, q_squared) = upper_bound_edge_count(k);
            assert!(q >= (k as u64) << k);
            let limit = BigUint::from(4u32)
                * BigUint::from(k)
                * BigUint::from(k)
                * (BigUint::one() << (2 * k));
            assert!(q_squared <= limit, "k = {k}");
        }
    }
}
