//! Splitting refuter that emits resolution trees.
//!
//! The solver branches on a variable, refutes both restrictions, and
//! resolves the two subtree roots on the branch variable. When a subtree's
//! root clause does not contain the branch literal, that subtree alone
//! already refutes the unbranched formula and replaces the resolution
//! step; this post-processing is what keeps every emitted label a genuine
//! resolvent. In unit-propagation mode, forced assignments resolve
//! against their reason clause on the way back up.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::cnf::{Assignment, Clause, CnfFormula, Literal, Var};

use super::{resolve_with_pivot, NodeId, ResolutionTree, TreeNode};

/// Variable selection among the unassigned variables of unsatisfied
/// clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPolicy {
    /// Smallest variable id first.
    #[default]
    FixedOrder,
    /// Highest degree in the current restriction first, ties to the
    /// smallest id.
    MaxDegreeFirst,
    /// Uniformly random, from the configured seed.
    SeededRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Plain splitting; the tree mirrors the full decision tree.
    #[default]
    PureSplit,
    /// Propagate unit clauses between decisions.
    UnitPropagation,
}

#[derive(Debug, Clone)]
pub struct DpllConfig {
    pub policy: BranchPolicy,
    pub mode: SplitMode,
    /// Seed for the random branch policy.
    pub seed: u64,
    /// Maximum number of decisions before giving up.
    pub decision_budget: u64,
}

impl Default for DpllConfig {
    fn default() -> Self {
        DpllConfig {
            policy: BranchPolicy::FixedOrder,
            mode: SplitMode::PureSplit,
            seed: 0,
            decision_budget: u64::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DpllStats {
    pub decisions: u64,
    pub propagations: u64,
    /// Leaves of the emitted tree (zero unless unsatisfiable).
    pub leaf_count: u64,
    /// Nodes of the emitted tree (zero unless unsatisfiable).
    pub node_count: u64,
    pub max_recursion_depth: u32,
}

#[derive(Debug, Clone)]
pub enum DpllOutcome {
    /// Satisfiable, with a verified total model over the universe.
    Sat { model: Assignment },
    /// Unsatisfiable, with the refutation tree built from the trace.
    Unsat {
        tree: ResolutionTree,
        stats: DpllStats,
    },
    /// The decision budget ran out; partial statistics only.
    BudgetExceeded { stats: DpllStats },
}

/// Decides `formula` by splitting, emitting a resolution tree on
/// unsatisfiable inputs. Branch values are tried 0 then 1. Deterministic
/// for a fixed configuration.
pub fn dpll_refute(formula: &CnfFormula, config: &DpllConfig) -> DpllOutcome {
    let mut solver = Solver::new(formula, config);
    match solver.solve(0) {
        Step::Sat(values) => {
            let mut model = Assignment::new();
            for (slot, value) in values.iter().enumerate() {
                let var = Var::new(solver.var_ids[slot]);
                model
                    .assign(var, value.unwrap_or(false))
                    .expect("slots are distinct variables");
            }
            for &var in formula.vars() {
                if !model.contains(var) {
                    model.assign(var, false).expect("fresh variable");
                }
            }
            assert_eq!(formula.evaluate(&model), Ok(true), "sat model must verify");
            DpllOutcome::Sat { model }
        }
        Step::Refuted(root) => {
            let tree = solver.compact(root);
            let mut stats = solver.stats();
            stats.node_count = tree.len() as u64;
            stats.leaf_count = tree
                .nodes()
                .iter()
                .filter(|n| matches!(n, TreeNode::Leaf { .. }))
                .count() as u64;
            DpllOutcome::Unsat { tree, stats }
        }
        Step::Budget => DpllOutcome::BudgetExceeded {
            stats: solver.stats(),
        },
    }
}

enum Step {
    /// Snapshot of the assignment at the moment satisfaction was seen;
    /// the values themselves are unwound on the way back up.
    Sat(Vec<Option<bool>>),
    Refuted(u32),
    Budget,
}

struct Solver<'a> {
    clauses: Vec<&'a Clause>,
    // Per-clause counters.
    true_count: Vec<u32>,
    false_count: Vec<u32>,
    satisfied_total: usize,
    falsified: BTreeSet<u32>,
    units: BTreeSet<u32>,
    // Per-variable slot state; slots are variables in increasing id order.
    var_ids: Vec<u32>,
    slot_of_id: Vec<usize>,
    occurrences: Vec<Vec<(u32, bool)>>,
    values: Vec<Option<bool>>,
    active_occ: Vec<u32>,
    actives: BTreeSet<u32>,
    // Search configuration and trace.
    policy: BranchPolicy,
    mode: SplitMode,
    rng: ChaCha12Rng,
    decision_budget: u64,
    decisions: u64,
    propagations: u64,
    max_depth: u32,
    arena: Vec<TreeNode>,
}

impl<'a> Solver<'a> {
    fn new(formula: &'a CnfFormula, config: &DpllConfig) -> Solver<'a> {
        let clauses: Vec<&Clause> = formula.clauses().collect();
        let var_ids: Vec<u32> = formula.vars().iter().map(|v| v.id()).collect();
        let max_id = var_ids.last().copied().unwrap_or(0);
        let mut slot_of_id = alloc::vec![usize::MAX; max_id as usize + 1];
        for (slot, &id) in var_ids.iter().enumerate() {
            slot_of_id[id as usize] = slot;
        }
        let mut occurrences = alloc::vec![Vec::new(); var_ids.len()];
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause.literals() {
                occurrences[slot_of_id[lit.var().id() as usize]]
                    .push((ci as u32, lit.is_negated()));
            }
        }
        let active_occ: Vec<u32> = occurrences.iter().map(|o| o.len() as u32).collect();
        let actives: BTreeSet<u32> = (0..var_ids.len() as u32)
            .filter(|&s| active_occ[s as usize] > 0)
            .collect();
        let values = alloc::vec![None; var_ids.len()];
        let clause_count = clauses.len();
        let mut solver = Solver {
            true_count: alloc::vec![0; clause_count],
            false_count: alloc::vec![0; clause_count],
            satisfied_total: 0,
            falsified: BTreeSet::new(),
            units: BTreeSet::new(),
            var_ids,
            slot_of_id,
            occurrences,
            values,
            active_occ,
            actives,
            policy: config.policy,
            mode: config.mode,
            rng: ChaCha12Rng::seed_from_u64(config.seed),
            decision_budget: config.decision_budget,
            decisions: 0,
            propagations: 0,
            max_depth: 0,
            arena: Vec::new(),
            clauses,
        };
        for ci in 0..clause_count as u32 {
            solver.refresh_clause_state(ci);
        }
        solver
    }

    fn stats(&self) -> DpllStats {
        DpllStats {
            decisions: self.decisions,
            propagations: self.propagations,
            leaf_count: 0,
            node_count: 0,
            max_recursion_depth: self.max_depth,
        }
    }

    fn slot(&self, var: Var) -> usize {
        self.slot_of_id[var.id() as usize]
    }

    fn unassigned(&self, ci: u32) -> u32 {
        self.clauses[ci as usize].width() as u32
            - self.true_count[ci as usize]
            - self.false_count[ci as usize]
    }

    fn refresh_clause_state(&mut self, ci: u32) {
        let open = self.true_count[ci as usize] == 0;
        let unassigned = self.unassigned(ci);
        if open && unassigned == 0 {
            self.falsified.insert(ci);
        } else {
            self.falsified.remove(&ci);
        }
        if open && unassigned == 1 {
            self.units.insert(ci);
        } else {
            self.units.remove(&ci);
        }
    }

    fn assign(&mut self, slot: usize, value: bool) {
        debug_assert!(self.values[slot].is_none());
        self.values[slot] = Some(value);
        self.actives.remove(&(slot as u32));
        let occ = core::mem::take(&mut self.occurrences[slot]);
        for &(ci, negated) in &occ {
            if value != negated {
                self.true_count[ci as usize] += 1;
                if self.true_count[ci as usize] == 1 {
                    self.satisfied_total += 1;
                    self.retire_clause_vars(ci, slot);
                }
            } else {
                self.false_count[ci as usize] += 1;
            }
            self.refresh_clause_state(ci);
        }
        self.occurrences[slot] = occ;
    }

    fn unassign(&mut self, slot: usize, value: bool) {
        debug_assert_eq!(self.values[slot], Some(value));
        let occ = core::mem::take(&mut self.occurrences[slot]);
        let mut active = 0u32;
        for &(ci, negated) in &occ {
            if value != negated {
                if self.true_count[ci as usize] == 1 {
                    self.satisfied_total -= 1;
                    self.revive_clause_vars(ci, slot);
                }
                self.true_count[ci as usize] -= 1;
            } else {
                self.false_count[ci as usize] -= 1;
            }
            if self.true_count[ci as usize] == 0 {
                active += 1;
            }
            self.refresh_clause_state(ci);
        }
        self.occurrences[slot] = occ;
        self.values[slot] = None;
        self.active_occ[slot] = active;
        if active > 0 {
            self.actives.insert(slot as u32);
        }
    }

    /// The clause just became satisfied: its other unassigned variables
    /// lose one active occurrence.
    fn retire_clause_vars(&mut self, ci: u32, cause_slot: usize) {
        let clause = self.clauses[ci as usize];
        for lit in clause.literals() {
            let s = self.slot(lit.var());
            if s != cause_slot && self.values[s].is_none() {
                self.active_occ[s] -= 1;
                if self.active_occ[s] == 0 {
                    self.actives.remove(&(s as u32));
                }
            }
        }
    }

    /// The clause is becoming unsatisfied again on backtrack.
    fn revive_clause_vars(&mut self, ci: u32, cause_slot: usize) {
        let clause = self.clauses[ci as usize];
        for lit in clause.literals() {
            let s = self.slot(lit.var());
            if s != cause_slot && self.values[s].is_none() {
                if self.active_occ[s] == 0 {
                    self.actives.insert(s as u32);
                }
                self.active_occ[s] += 1;
            }
        }
    }

    fn push_leaf(&mut self, ci: u32) -> u32 {
        self.arena.push(TreeNode::Leaf {
            clause: self.clauses[ci as usize].clone(),
        });
        (self.arena.len() - 1) as u32
    }

    fn pick_slot(&mut self) -> usize {
        debug_assert!(!self.actives.is_empty());
        match self.policy {
            BranchPolicy::FixedOrder => *self.actives.first().expect("nonempty") as usize,
            BranchPolicy::MaxDegreeFirst => {
                let mut best = usize::MAX;
                let mut best_occ = 0;
                for &s in &self.actives {
                    let occ = self.active_occ[s as usize];
                    if occ > best_occ {
                        best_occ = occ;
                        best = s as usize;
                    }
                }
                best
            }
            BranchPolicy::SeededRandom => {
                let n = self.actives.len();
                let idx = self.rng.gen_range(0..n);
                *self.actives.iter().nth(idx).expect("index in range") as usize
            }
        }
    }

    /// The single unassigned literal of a unit clause.
    fn unit_literal(&self, ci: u32) -> Literal {
        *self.clauses[ci as usize]
            .literals()
            .iter()
            .find(|l| self.values[self.slot(l.var())].is_none())
            .expect("unit clause has an unassigned literal")
    }

    fn solve(&mut self, depth: u32) -> Step {
        self.max_depth = self.max_depth.max(depth);
        if let Some(&ci) = self.falsified.first() {
            // First falsified clause in canonical order labels the leaf.
            return Step::Refuted(self.push_leaf(ci));
        }
        if self.satisfied_total == self.clauses.len() {
            return Step::Sat(self.values.clone());
        }
        if self.mode == SplitMode::UnitPropagation {
            if let Some(&ci) = self.units.first() {
                return self.propagate(ci, depth);
            }
        }
        if self.decisions >= self.decision_budget {
            return Step::Budget;
        }
        self.decisions += 1;
        let slot = self.pick_slot();
        let var = Var::new(self.var_ids[slot]);

        self.assign(slot, false);
        let zero_branch = self.solve(depth + 1);
        self.unassign(slot, false);
        let zero_tree = match zero_branch {
            Step::Refuted(t) => t,
            other => return other,
        };
        // If the 0-branch refutation never used the branch literal it
        // refutes the formula outright.
        if !self.arena[zero_tree as usize]
            .clause()
            .contains(Literal::positive(var))
        {
            return Step::Refuted(zero_tree);
        }

        self.assign(slot, true);
        let one_branch = self.solve(depth + 1);
        self.unassign(slot, true);
        let one_tree = match one_branch {
            Step::Refuted(t) => t,
            other => return other,
        };
        if !self.arena[one_tree as usize]
            .clause()
            .contains(Literal::negative(var))
        {
            return Step::Refuted(one_tree);
        }

        Step::Refuted(self.push_resolvent(zero_tree, one_tree, var))
    }

    fn propagate(&mut self, reason: u32, depth: u32) -> Step {
        let lit = self.unit_literal(reason);
        let slot = self.slot(lit.var());
        let value = !lit.is_negated();
        self.propagations += 1;
        self.assign(slot, value);
        let sub = self.solve(depth + 1);
        self.unassign(slot, value);
        let subtree = match sub {
            Step::Refuted(t) => t,
            other => return other,
        };
        if !self.arena[subtree as usize]
            .clause()
            .contains(lit.complement())
        {
            return Step::Refuted(subtree);
        }
        let reason_leaf = self.push_leaf(reason);
        // The reason clause is falsified on the branch opposite to the
        // propagated value; keep children in 0-then-1 order.
        let (left, right) = if value {
            (reason_leaf, subtree)
        } else {
            (subtree, reason_leaf)
        };
        Step::Refuted(self.push_resolvent(left, right, lit.var()))
    }

    fn push_resolvent(&mut self, left: u32, right: u32, pivot: Var) -> u32 {
        let (clause, var) = resolve_with_pivot(
            self.arena[left as usize].clause(),
            self.arena[right as usize].clause(),
        )
        .expect("branch construction guarantees a unique clash");
        debug_assert_eq!(var, pivot);
        self.arena.push(TreeNode::Resolvent {
            clause,
            pivot,
            left: NodeId(left),
            right: NodeId(right),
        });
        (self.arena.len() - 1) as u32
    }

    /// Extracts the subtree reachable from `root` in child-before-parent
    /// order, dropping abandoned branches.
    fn compact(&mut self, root: u32) -> ResolutionTree {
        let mut order: Vec<u32> = Vec::new();
        let mut stack = alloc::vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            stack.push((id, true));
            if let TreeNode::Resolvent { left, right, .. } = &self.arena[id as usize] {
                stack.push((right.0, false));
                stack.push((left.0, false));
            }
        }
        let mut remap = alloc::collections::BTreeMap::new();
        let mut nodes = Vec::with_capacity(order.len());
        for &old in &order {
            let node = match &self.arena[old as usize] {
                TreeNode::Leaf { clause } => TreeNode::Leaf {
                    clause: clause.clone(),
                },
                TreeNode::Resolvent {
                    clause,
                    pivot,
                    left,
                    right,
                } => TreeNode::Resolvent {
                    clause: clause.clone(),
                    pivot: *pivot,
                    left: NodeId(remap[&left.0]),
                    right: NodeId(remap[&right.0]),
                },
            };
            remap.insert(old, nodes.len() as u32);
            nodes.push(node);
        }
        let root = NodeId(remap[&root]);
        ResolutionTree::new(nodes, root)
    }
}
