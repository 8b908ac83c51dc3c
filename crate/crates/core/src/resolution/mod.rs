//! Resolution trees: resolvents, checkable tree proofs, and the size
//! bound for refutations of weakly linear formulas.
//!
//! A resolution tree for a formula F is a binary tree of clauses whose
//! leaves are clauses of F, whose root is the empty clause, and where
//! every internal clause is the resolvent of its two children. The
//! [`dpll_refute`] engine emits such trees bottom-up from its splitting
//! trace; [`check_tree`] validates any tree against a formula and reports
//! strictness (pairwise distinct leaf labels) and regularity (no variable
//! resolved twice on a root-to-leaf path).

mod dpll;

pub use dpll::{dpll_refute, BranchPolicy, DpllConfig, DpllOutcome, DpllStats, SplitMode};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Var};
use crate::exact::{pow2_interval, Capped, FpInterval, DEFAULT_BIT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("clauses share no clashing literal")]
    NoClash,
    #[error("clauses clash on {0} variables; a resolvent needs exactly one")]
    MultiClash(usize),
}

/// The resolvent of two clauses clashing on exactly one literal.
pub fn resolve(c: &Clause, d: &Clause) -> Result<Clause, ResolveError> {
    resolve_with_pivot(c, d).map(|(clause, _)| clause)
}

/// Resolvent plus the variable resolved on.
pub fn resolve_with_pivot(c: &Clause, d: &Clause) -> Result<(Clause, Var), ResolveError> {
    let (mut i, mut j) = (0, 0);
    let (a, b) = (c.literals(), d.literals());
    let mut pivot = None;
    let mut clashes = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].var().cmp(&b[j].var()) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if a[i] != b[j] {
                    clashes += 1;
                    pivot = Some(a[i].var());
                }
                i += 1;
                j += 1;
            }
        }
    }
    match clashes {
        0 => return Err(ResolveError::NoClash),
        1 => {}
        n => return Err(ResolveError::MultiClash(n)),
    }
    let pivot = pivot.expect("exactly one clash recorded");
    let mut merged = Vec::with_capacity(a.len() + b.len() - 2);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.var() <= y.var(),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_a {
            let lit = a[i];
            i += 1;
            if lit.var() == pivot {
                continue;
            }
            if j < b.len() && b[j].var() == lit.var() {
                j += 1; // identical literal in both clauses
            }
            merged.push(lit);
        } else {
            let lit = b[j];
            j += 1;
            if lit.var() == pivot {
                continue;
            }
            merged.push(lit);
        }
    }
    Ok((Clause::from_sorted_unchecked(merged), pivot))
}

/// Index of a node in a [`ResolutionTree`] pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf {
        clause: Clause,
    },
    Resolvent {
        clause: Clause,
        pivot: Var,
        /// Children in branch order: the 0-branch first.
        left: NodeId,
        right: NodeId,
    },
}

impl TreeNode {
    pub fn clause(&self) -> &Clause {
        match self {
            TreeNode::Leaf { clause } => clause,
            TreeNode::Resolvent { clause, .. } => clause,
        }
    }

    pub fn children(&self) -> Option<[NodeId; 2]> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Resolvent { left, right, .. } => Some([*left, *right]),
        }
    }
}

/// A clause-labeled binary tree stored as an indexed node pool. The pool
/// may contain nodes unreachable from the root; checking and traversal
/// consider the reachable subtree only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTree {
    nodes: Vec<TreeNode>,
    root: NodeId,
}

impl ResolutionTree {
    pub fn new(nodes: Vec<TreeNode>, root: NodeId) -> ResolutionTree {
        ResolutionTree { nodes, root }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(id.index())
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Clause at the root, if the root id is in range.
    pub fn root_clause(&self) -> Option<&Clause> {
        self.node(self.root).map(|n| n.clause())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("root {0} out of range")]
    RootOutOfRange(NodeId),
    #[error("node {node} references missing child {child}")]
    DanglingChild { node: NodeId, child: NodeId },
    #[error("node {0} is reachable along two paths; not a tree")]
    SharedNode(NodeId),
}

/// Verdict of [`check_tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    /// Leaves are clauses of the formula, the root is the empty clause,
    /// and every internal clause is the resolvent of its children.
    pub valid: bool,
    /// No two leaves carry the same clause.
    pub strict: bool,
    /// No variable is resolved twice on any root-to-leaf path.
    pub regular: bool,
    pub leaf_count: u64,
    /// Edges on the longest root-to-leaf path.
    pub depth: u32,
    /// Leaves whose clause is not in the formula.
    pub leaves_not_in_formula: Vec<NodeId>,
}

/// Validates the reachable subtree of `tree` against `formula`.
///
/// Structural defects (dangling children, shared subtrees) are errors;
/// semantic defects (foreign leaves, wrong resolvents, nonempty root) make
/// the report invalid.
pub fn check_tree(tree: &ResolutionTree, formula: &CnfFormula) -> Result<TreeReport, TreeError> {
    if tree.node(tree.root).is_none() {
        return Err(TreeError::RootOutOfRange(tree.root));
    }
    let mut visited = alloc::vec![false; tree.len()];
    let mut valid = tree.root_clause().map(|c| c.is_empty()).unwrap_or(false);
    let mut leaves_not_in_formula = Vec::new();
    let mut leaf_clauses: Vec<&Clause> = Vec::new();
    let mut leaf_count = 0u64;
    let mut depth = 0u32;
    let mut regular = true;

    // Iterative depth-first walk with explicit enter/exit events to track
    // the pivot multiset along the current path.
    let mut pivots_on_path: alloc::collections::BTreeMap<Var, u32> = Default::default();
    enum Event {
        Enter(NodeId, u32),
        Exit(Var),
    }
    let mut stack = alloc::vec![Event::Enter(tree.root, 0)];
    while let Some(event) = stack.pop() {
        match event {
            Event::Exit(pivot) => {
                let count = pivots_on_path
                    .get_mut(&pivot)
                    .expect("exit matches an enter");
                *count -= 1;
                if *count == 0 {
                    pivots_on_path.remove(&pivot);
                }
            }
            Event::Enter(id, d) => {
                if visited[id.index()] {
                    return Err(TreeError::SharedNode(id));
                }
                visited[id.index()] = true;
                depth = depth.max(d);
                match &tree.nodes[id.index()] {
                    TreeNode::Leaf { clause } => {
                        leaf_count += 1;
                        leaf_clauses.push(clause);
                        if !formula.contains_clause(clause) {
                            valid = false;
                            leaves_not_in_formula.push(id);
                        }
                    }
                    TreeNode::Resolvent {
                        clause,
                        pivot,
                        left,
                        right,
                    } => {
                        for child in [left, right] {
                            if tree.node(*child).is_none() {
                                return Err(TreeError::DanglingChild {
                                    node: id,
                                    child: *child,
                                });
                            }
                        }
                        let left_clause = tree.nodes[left.index()].clause();
                        let right_clause = tree.nodes[right.index()].clause();
                        match resolve_with_pivot(left_clause, right_clause) {
                            Ok((resolvent, var)) if &resolvent == clause && var == *pivot => {}
                            _ => valid = false,
                        }
                        if pivots_on_path.contains_key(pivot) {
                            regular = false;
                        }
                        *pivots_on_path.entry(*pivot).or_insert(0) += 1;
                        stack.push(Event::Exit(*pivot));
                        stack.push(Event::Enter(*right, d + 1));
                        stack.push(Event::Enter(*left, d + 1));
                    }
                }
            }
        }
    }

    let distinct: BTreeSet<&Clause> = leaf_clauses.iter().copied().collect();
    let strict = distinct.len() as u64 == leaf_count;
    Ok(TreeReport {
        valid,
        strict,
        regular,
        leaf_count,
        depth,
        leaves_not_in_formula,
    })
}

/// Minimum leaf count of any resolution tree refuting an unsatisfiable
/// weakly linear k-CNF formula: `ceil(2^(2^(k/2 - 1)))`, exact.
///
/// For even k the exponent is integral and the result a power of two,
/// capped by the bit budget alone; for odd k the value is pinned by an
/// outward-rounded dyadic interval whose cost grows superquadratically in
/// the exponent, so odd widths are additionally capped at
/// [`crate::exact::FRACTIONAL_POW2_WORK_CAP`] result bits (k <= 25).
pub fn treelike_lower_bound(k: u32) -> Capped<BigUint> {
    treelike_lower_bound_with_budget(k, DEFAULT_BIT_BUDGET)
}

pub fn treelike_lower_bound_with_budget(k: u32, bit_budget: u64) -> Capped<BigUint> {
    assert!(k >= 2);
    if k.is_multiple_of(2) {
        let shift = k / 2 - 1;
        if shift >= 63 {
            return Capped::Overflow {
                bits_needed: u64::MAX,
            };
        }
        let exponent = 1u64 << shift;
        if exponent.saturating_add(1) > bit_budget {
            return Capped::Overflow {
                bits_needed: exponent.saturating_add(1),
            };
        }
        return Capped::Value(BigUint::one() << exponent);
    }
    // Odd k: exponent sqrt(2^(k-2)).
    if k as u64 - 2 >= 126 {
        return Capped::Overflow {
            bits_needed: u64::MAX,
        };
    }
    let exponent_estimate = (1u128 << (k - 2)).isqrt() as u64 + 2;
    if exponent_estimate > bit_budget.min(crate::exact::FRACTIONAL_POW2_WORK_CAP) {
        return Capped::Overflow {
            bits_needed: exponent_estimate,
        };
    }
    let mut frac_bits: u32 = (exponent_estimate + 32)
        .try_into()
        .expect("within bit budget");
    loop {
        let exponent = FpInterval::from_int(BigUint::one() << (k - 2), frac_bits).sqrt();
        let value = pow2_interval(&exponent);
        if let Some(ceil) = value.ceil() {
            return Capped::Value(ceil);
        }
        frac_bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause;
    use crate::cnf::CnfFormula;

    #[test]
    fn resolvent_textbook_cases() {
        assert_eq!(
            resolve(&clause![1, 2], &clause![-1, 3]).unwrap(),
            clause![2, 3]
        );
        assert_eq!(resolve(&clause![1], &clause![-1]).unwrap(), Clause::empty());
        assert_eq!(
            resolve(&clause![1, 2], &clause![-1, -2]),
            Err(ResolveError::MultiClash(2))
        );
        assert_eq!(
            resolve(&clause![1, 2], &clause![1, 3]),
            Err(ResolveError::NoClash)
        );
        // Shared literals appear once in the resolvent.
        assert_eq!(
            resolve(&clause![1, 2, 3], &clause![-1, 2, 4]).unwrap(),
            clause![2, 3, 4]
        );
    }

    #[test]
    fn resolvent_is_sound() {
        // Any assignment satisfying both parents satisfies the resolvent.
        let c = clause![1, 2];
        let d = clause![-1, 3];
        let (r, pivot) = resolve_with_pivot(&c, &d).unwrap();
        assert_eq!(pivot, Var::new(1));
        for bits in 0u32..8 {
            let assignment = crate::cnf::Assignment::from_pairs(
                (1..=3).map(|i| (Var::new(i), bits >> (i - 1) & 1 == 1)),
            )
            .unwrap();
            let sat = |cl: &Clause| {
                cl.literals()
                    .iter()
                    .any(|&l| assignment.value_of(l) == Some(true))
            };
            if sat(&c) && sat(&d) {
                assert!(sat(&r));
            }
        }
    }

    fn three_node_tree() -> (ResolutionTree, CnfFormula) {
        let f = CnfFormula::new([clause![1], clause![-1]]);
        let tree = ResolutionTree::new(
            alloc::vec![
                TreeNode::Leaf { clause: clause![1] },
                TreeNode::Leaf {
                    clause: clause![-1]
                },
                TreeNode::Resolvent {
                    clause: Clause::empty(),
                    pivot: Var::new(1),
                    left: NodeId(0),
                    right: NodeId(1),
                },
            ],
            NodeId(2),
        );
        (tree, f)
    }

    #[test]
    fn check_tree_accepts_unit_refutation() {
        let (tree, f) = three_node_tree();
        let report = check_tree(&tree, &f).unwrap();
        assert!(report.valid && report.strict && report.regular);
        assert_eq!(report.leaf_count, 2);
        assert_eq!(report.depth, 1);
    }

    #[test]
    fn check_tree_flags_foreign_leaf() {
        let (tree, _) = three_node_tree();
        let other = CnfFormula::new([clause![1], clause![-1, 2]]);
        let report = check_tree(&tree, &other).unwrap();
        assert!(!report.valid);
        assert_eq!(report.leaves_not_in_formula, alloc::vec![NodeId(1)]);
    }

    #[test]
    fn check_tree_flags_wrong_resolvent_and_root() {
        let f = CnfFormula::new([clause![1], clause![-1]]);
        let tree = ResolutionTree::new(
            alloc::vec![
                TreeNode::Leaf { clause: clause![1] },
                TreeNode::Leaf {
                    clause: clause![-1]
                },
                TreeNode::Resolvent {
                    // Wrong label: should be the empty clause.
                    clause: clause![1],
                    pivot: Var::new(1),
                    left: NodeId(0),
                    right: NodeId(1),
                },
            ],
            NodeId(2),
        );
        let report = check_tree(&tree, &f).unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn check_tree_rejects_malformed() {
        let f = CnfFormula::new([clause![1]]);
        let dangling = ResolutionTree::new(
            alloc::vec![TreeNode::Resolvent {
                clause: Clause::empty(),
                pivot: Var::new(1),
                left: NodeId(5),
                right: NodeId(6),
            }],
            NodeId(0),
        );
        assert!(matches!(
            check_tree(&dangling, &f),
            Err(TreeError::DanglingChild { .. })
        ));

        let shared_leaf = ResolutionTree::new(
            alloc::vec![
                TreeNode::Leaf { clause: clause![1] },
                TreeNode::Resolvent {
                    clause: Clause::empty(),
                    pivot: Var::new(1),
                    left: NodeId(0),
                    right: NodeId(0),
                },
            ],
            NodeId(1),
        );
        assert!(matches!(
            check_tree(&shared_leaf, &f),
            Err(TreeError::SharedNode(NodeId(0)))
        ));

        let out_of_range = ResolutionTree::new(Vec::new(), NodeId(0));
        assert!(matches!(
            check_tree(&out_of_range, &f),
            Err(TreeError::RootOutOfRange(NodeId(0)))
        ));
    }

    #[test]
    fn treelike_bound_values() {
        assert_eq!(treelike_lower_bound(2), Capped::Value(BigUint::from(2u32)));
        assert_eq!(treelike_lower_bound(4), Capped::Value(BigUint::from(4u32)));
        assert_eq!(treelike_lower_bound(6), Capped::Value(BigUint::from(16u32)));
        assert_eq!(
            treelike_lower_bound(8),
            Capped::Value(BigUint::from(256u32))
        );
    }

    #[test]
    fn treelike_bound_odd_k_matches_float_oracle() {
        // ceil(2^sqrt(2^(k-2))) for odd k, small enough for f64.
        for k in [3u32, 5, 7, 9, 11] {
            let s = libm::sqrt(libm::exp2(k as f64 - 2.0));
            let oracle = libm::ceil(libm::exp2(s)) as u64;
            assert_eq!(
                treelike_lower_bound(k),
                Capped::Value(BigUint::from(oracle)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn treelike_bound_caps() {
        assert!(treelike_lower_bound_with_budget(42, 1_000_000).is_overflow());
        assert!(treelike_lower_bound_with_budget(20, 100).is_overflow());
    }
}
