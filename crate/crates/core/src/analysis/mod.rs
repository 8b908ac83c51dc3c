//! Structural measures of formulas and hypergraphs: the restriction-walk
//! weight function, degree stripping, richness, conflict graphs with
//! clique-removal numbers, and exact bound calculators.

mod bounds;
mod graphs;

pub use bounds::{
    rich_edge_bound, size_bounds, theta_nu, tower, BoundKind, BoundsReport, SurveyBound,
    ThetaNuLevel, ThetaNuSequence, F_SURVEY,
};
pub use graphs::{
    conflict_graph, kappa, kappa_lipschitz_check, kappa_profile, kappa_with_cap,
    subtree_leaf_clauses, tree_distance, ConflictGraph, Graph, GraphError, KappaProfile,
    KAPPA_DEFAULT_VERTEX_CAP,
};

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::cnf::{Assignment, Clause, CnfFormula, LinearityMode, Var};
use crate::exact::binomial;
use crate::hypergraph::Hypergraph;
use crate::resolution::{NodeId, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("formula is not weakly linear")]
    NotWeaklyLinear,
    #[error("variable {0} does not occur in the formula")]
    VariableNotInFormula(Var),
    #[error("formula is not uniform of width {0}")]
    NotKUniform(usize),
    #[error("clause of width {width} is too short to strip {b} literals")]
    ClauseTooShort { width: usize, b: usize },
    #[error("hypergraph is not linear")]
    NonLinearHypergraph,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("resolution tree does not check out against the formula")]
    InvalidTree,
    #[error("unknown tree node {0}")]
    UnknownNode(NodeId),
    #[error("{descendant} is not a descendant of {ancestor}")]
    NotAnAncestor {
        ancestor: NodeId,
        descendant: NodeId,
    },
    #[error("graph with {vertices} vertices exceeds the clique-removal cap {cap}")]
    KappaCapExceeded { vertices: u32, cap: u32 },
    #[error("clique size must be at least 1")]
    CliqueSizeZero,
    #[error("recurrence infeasible: theta at level {level} is {theta}")]
    InfeasibleParameters { level: u32, theta: BigInt },
    #[error("tower base must exceed 1")]
    TowerBaseTooSmall,
    #[error("precision budget exhausted before the value was pinned")]
    PrecisionExhausted,
}

/// Weight of a formula relative to width `k`: clauses of width at most
/// `k - 2` contribute `2^(k - width)`; wider clauses contribute nothing.
/// A k-uniform formula has weight 0 and a formula containing the empty
/// clause has weight at least `2^k`.
pub fn weight(formula: &CnfFormula, k: usize) -> u128 {
    assert!(k <= 100, "weight exponent beyond desk scale");
    assert!(
        formula.max_width() <= k,
        "reference width must cover every clause"
    );
    formula
        .clauses()
        .filter(|c| c.width() + 2 <= k)
        .map(|c| 1u128 << (k - c.width()))
        .sum()
}

/// Exact one-step inequality of the restriction walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStepCheck {
    /// Average weight after setting `y` to 0 and to 1.
    pub lhs: BigRational,
    /// `w(F) + 2 * d_(k-1)(y, F)`.
    pub rhs: BigRational,
    pub pass: bool,
}

/// Checks that restricting a weakly linear formula on `y` raises the
/// expected weight by at most twice the number of (k-1)-clauses through
/// `y`: `(w(F|y=0) + w(F|y=1)) / 2 <= w(F) + 2 d_(k-1)(y, F)`, exactly.
pub fn walk_step_check(
    formula: &CnfFormula,
    k: usize,
    y: Var,
) -> Result<WalkStepCheck, AnalysisError> {
    if !formula.linearity(1, LinearityMode::Weak) {
        return Err(AnalysisError::NotWeaklyLinear);
    }
    if !formula.vars().contains(&y) {
        return Err(AnalysisError::VariableNotInFormula(y));
    }
    let w = weight(formula, k);
    let d = formula.degree_stats_for_width(k).k_minus_1_degree(y);
    let mut w_branch = [0u128; 2];
    for (value, slot) in [(false, 0), (true, 1)] {
        let restricted =
            formula.restrict(&Assignment::from_pairs([(y, value)]).expect("single pair"));
        w_branch[slot] = weight(&restricted, k);
    }
    let lhs = BigRational::new(BigInt::from(w_branch[0] + w_branch[1]), BigInt::from(2));
    let rhs = BigRational::from(BigInt::from(w + 2 * d as u128));
    let pass = lhs <= rhs;
    Ok(WalkStepCheck { lhs, rhs, pass })
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    /// Walk length.
    pub steps: u32,
    pub trials: u32,
    pub seed: u64,
}

/// Statistics of a batch of restriction walks.
///
/// The walk is not the minimal-tree walk of the treelike lower bound
/// argument; it descends by restriction with a documented policy (branch
/// on a maximum-degree variable of the current restriction, value chosen
/// uniformly) and stops early when the empty clause appears. Reported
/// figures are statistics of this policy, not expectations over minimal
/// trees.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStats {
    pub trials: u32,
    pub steps: u32,
    pub final_weights: Vec<u128>,
    pub mean_final_weight: f64,
    pub max_weight: u128,
    pub max_k_minus_1_degree: u32,
    pub walks_hitting_empty_clause: u32,
    /// `d_(k-1)(x, F_i) <= 2i` held at every step of every walk.
    pub dk1_within_2i: bool,
    /// Per-step growth `d_(k-1)` at most +2 held pointwise.
    pub dk1_growth_within_2: bool,
    /// The exact one-step inequality held at every visited step.
    pub step_inequality_ok: bool,
    /// Sample mean of the final weight is at most `2 l^2` plus three
    /// standard errors.
    pub mean_within_expectation: bool,
}

/// Runs `trials` seeded restriction walks of length `steps` on a weakly
/// linear k-uniform formula, checking the per-step degree bounds along
/// every trajectory.
pub fn random_walk_experiment(
    formula: &CnfFormula,
    k: usize,
    config: &WalkConfig,
) -> Result<WalkStats, AnalysisError> {
    if !formula.linearity(1, LinearityMode::Weak) {
        return Err(AnalysisError::NotWeaklyLinear);
    }
    if formula.uniform_width() != Some(k) {
        return Err(AnalysisError::NotKUniform(k));
    }
    let mut final_weights = Vec::with_capacity(config.trials as usize);
    let mut max_weight = 0u128;
    let mut max_dk1 = 0u32;
    let mut hit_empty = 0u32;
    let mut dk1_within_2i = true;
    let mut growth_ok = true;
    let mut step_ok = true;

    for trial in 0..config.trials {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
        let mut current = formula.clone();
        let mut prev_dk1 = degree_snapshot(&current, k);
        let mut reached_empty = false;
        for step in 1..=config.steps {
            if current.has_empty_clause() {
                reached_empty = true;
                break;
            }
            let Some(y) = pick_walk_variable(&current) else {
                break; // everything satisfied or no clause left
            };
            let check = walk_step_check(&current, k, y)?;
            step_ok &= check.pass;
            let value = rng.gen::<bool>();
            current = current.restrict(&Assignment::from_pairs([(y, value)]).expect("single pair"));
            let snapshot = degree_snapshot(&current, k);
            for &(var, d) in &snapshot {
                max_dk1 = max_dk1.max(d);
                if d > 2 * step {
                    dk1_within_2i = false;
                }
                let before = prev_dk1
                    .iter()
                    .find(|&&(v, _)| v == var)
                    .map(|&(_, d)| d)
                    .unwrap_or(0);
                if d > before + 2 {
                    growth_ok = false;
                }
            }
            prev_dk1 = snapshot;
            max_weight = max_weight.max(weight(&current, k));
        }
        if current.has_empty_clause() {
            reached_empty = true;
        }
        if reached_empty {
            hit_empty += 1;
        }
        final_weights.push(weight(&current, k));
    }

    let trials = config.trials.max(1) as f64;
    let mean = final_weights.iter().map(|&w| w as f64).sum::<f64>() / trials;
    let variance = final_weights
        .iter()
        .map(|&w| {
            let d = w as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / (trials - 1.0).max(1.0);
    let std_error = libm::sqrt(variance / trials);
    let bound = 2.0 * (config.steps as f64) * (config.steps as f64);
    let mean_within_expectation = mean <= bound + 3.0 * std_error;

    Ok(WalkStats {
        trials: config.trials,
        steps: config.steps,
        mean_final_weight: mean,
        max_weight,
        max_k_minus_1_degree: max_dk1,
        walks_hitting_empty_clause: hit_empty,
        dk1_within_2i,
        dk1_growth_within_2: growth_ok,
        step_inequality_ok: step_ok,
        mean_within_expectation,
        final_weights,
    })
}

fn degree_snapshot(formula: &CnfFormula, k: usize) -> Vec<(Var, u32)> {
    let stats = formula.degree_stats_for_width(k);
    formula
        .vars()
        .iter()
        .map(|&v| (v, stats.k_minus_1_degree(v)))
        .collect()
}

/// Maximum-degree variable of the current restriction, ties to the
/// smallest id; mirrors the degree-first splitting policy.
fn pick_walk_variable(formula: &CnfFormula) -> Option<Var> {
    let stats = formula.degree_stats();
    let mut best: Option<(u32, Var)> = None;
    for (var, degree) in stats.degrees() {
        if degree == 0 {
            continue;
        }
        match best {
            Some((d, _)) if d >= degree => {}
            _ => best = Some((degree, var)),
        }
    }
    best.map(|(_, v)| v)
}

/// Removes from every clause its `b` highest-occurrence literals
/// (occurrence counts taken in the input formula, ties broken by the
/// canonical literal order). Turns a k-CNF formula into a (k-b)-CNF
/// formula; the variable universe is preserved.
pub fn strip_max_degree(formula: &CnfFormula, b: usize) -> Result<CnfFormula, AnalysisError> {
    let stats = formula.degree_stats();
    let mut stripped = Vec::with_capacity(formula.clause_count());
    for clause in formula.clauses() {
        if clause.width() < b + 1 {
            return Err(AnalysisError::ClauseTooShort {
                width: clause.width(),
                b,
            });
        }
        let mut ranked: Vec<_> = clause.literals().to_vec();
        // Highest occurrence first; the derived literal order breaks ties.
        ranked.sort_by(|x, y| {
            stats
                .occurrence(*y)
                .cmp(&stats.occurrence(*x))
                .then(x.cmp(y))
        });
        let kept = ranked[b..].to_vec();
        stripped.push(Clause::new(kept).expect("subset of a valid clause"));
    }
    let mut result = CnfFormula::new(stripped);
    result.declare_vars(formula.vars().iter().copied());
    Ok(result)
}

/// Edge-count check for rich linear hypergraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichBoundCheck {
    pub is_rich: bool,
    pub edge_count: u64,
    /// `C(d+1, 2)`, the least edge count of a (d,d)-rich linear
    /// hypergraph.
    pub bound: u64,
    /// Vacuously true when the hypergraph is not (d,d)-rich.
    pub pass: bool,
}

/// Verifies that a (d, d)-rich linear hypergraph has at least
/// `C(d+1, 2)` edges.
pub fn rich_bound_check(h: &Hypergraph, d: u32) -> Result<RichBoundCheck, AnalysisError> {
    if !h.is_linear() {
        return Err(AnalysisError::NonLinearHypergraph);
    }
    let is_rich = h.is_rich(d as usize, d as usize);
    let bound = u64::try_from(&binomial(d as u64 + 1, 2)).expect("desk-scale binomial");
    let edge_count = h.edge_count() as u64;
    let pass = !is_rich || edge_count >= bound;
    Ok(RichBoundCheck {
        is_rich,
        edge_count,
        bound,
        pass,
    })
}
