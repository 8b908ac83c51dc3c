//! Conflict graphs of resolution-tree nodes and the clique-removal
//! numbers that measure them.
//!
//! For a node `a` of a checked resolution tree, the conflict graph has
//! the literals of the node's clause as vertices, with two literals
//! adjacent when they occur together in some leaf clause of the subtree.
//! Leaves give complete graphs; the root gives the empty graph. The
//! measure `kappa_i` is the least number of vertices whose removal leaves
//! no i-clique, computed here by exact subset search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::resolution::{check_tree, NodeId, ResolutionTree, TreeNode};

use super::AnalysisError;

/// Default vertex cap for the exact clique-removal search.
pub const KAPPA_DEFAULT_VERTEX_CAP: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    LoopEdge(u32),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: u32, vertex_count: u32 },
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(
        vertex_count: u32,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Graph, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    vertex_count,
                });
            }
            set.insert((u, v));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn complete(n: u32) -> Graph {
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.insert((u, v));
            }
        }
        Graph {
            vertex_count: n,
            edges,
        }
    }

    pub fn empty() -> Graph {
        Graph {
            vertex_count: 0,
            edges: BTreeSet::new(),
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&(u, v))
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Adjacency bitmask per vertex; requires at most 64 vertices.
    fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = alloc::vec![0u64; self.vertex_count as usize];
        for &(u, v) in &self.edges {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        adj
    }
}

/// Least number of vertices whose removal leaves no i-clique, with the
/// default vertex cap. `kappa(G, 1)` is the vertex count and
/// `kappa(G, 2)` the minimum vertex cover size.
pub fn kappa(graph: &Graph, i: u32) -> Result<u32, AnalysisError> {
    kappa_with_cap(graph, i, KAPPA_DEFAULT_VERTEX_CAP)
}

/// Exact search: try removal sets by increasing size, testing clique
/// freedom with a pruned extension search.
pub fn kappa_with_cap(graph: &Graph, i: u32, cap: u32) -> Result<u32, AnalysisError> {
    if i == 0 {
        return Err(AnalysisError::CliqueSizeZero);
    }
    let n = graph.vertex_count;
    if n > cap || cap > 60 {
        return Err(AnalysisError::KappaCapExceeded {
            vertices: n,
            cap: cap.min(60),
        });
    }
    let adj = graph.adjacency_masks();
    let full: u64 = if n == 0 { 0 } else { (1 << n) - 1 };
    if !has_clique(&adj, full, i) {
        return Ok(0);
    }
    for size in 1..=n {
        let mut found = None;
        for_each_subset(n, size, &mut |mask| {
            if found.is_none() && !has_clique(&adj, full & !mask, i) {
                found = Some(size);
            }
        });
        if let Some(size) = found {
            return Ok(size);
        }
    }
    unreachable!("removing every vertex leaves no clique")
}

/// Any i-clique within the allowed vertex set?
fn has_clique(adj: &[u64], allowed: u64, i: u32) -> bool {
    fn extend(adj: &[u64], candidates: u64, need: u32) -> bool {
        if need == 0 {
            return true;
        }
        if (candidates.count_ones()) < need {
            return false;
        }
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // Only extend with higher-numbered vertices to visit each
            // clique once.
            if extend(adj, rest & adj[v], need - 1) {
                return true;
            }
        }
        false
    }
    extend(adj, allowed, i)
}

fn for_each_subset(n: u32, size: u32, f: &mut impl FnMut(u64)) {
    // Gosper's hack over n-bit masks of the given popcount.
    if size == 0 {
        f(0);
        return;
    }
    if size > n {
        return;
    }
    let limit: u64 = 1 << n;
    let mut mask: u64 = (1 << size) - 1;
    while mask < limit {
        f(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

/// The sequence `kappa_1 .. kappa_k` of a graph; non-increasing in i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaProfile {
    values: Vec<u32>,
}

impl KappaProfile {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `kappa_i`, for i in `1..=len`.
    pub fn get(&self, i: u32) -> Option<u32> {
        self.values.get(i as usize - 1).copied()
    }
}

pub fn kappa_profile(graph: &Graph, k: u32, cap: u32) -> Result<KappaProfile, AnalysisError> {
    let values: Vec<u32> = (1..=k)
        .map(|i| kappa_with_cap(graph, i, cap))
        .collect::<Result<_, _>>()?;
    assert!(
        values.windows(2).all(|w| w[1] <= w[0]),
        "kappa must be non-increasing"
    );
    Ok(KappaProfile { values })
}

/// Conflict graph of a tree node: vertices are the literals of the node's
/// clause, indexed in clause order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub literals: Vec<Literal>,
    pub graph: Graph,
}

/// Builds the conflict graph at `node` of a tree that checks out valid
/// against `formula`.
pub fn conflict_graph(
    tree: &ResolutionTree,
    formula: &CnfFormula,
    node: NodeId,
) -> Result<ConflictGraph, AnalysisError> {
    let report = check_tree(tree, formula)?;
    if !report.valid {
        return Err(AnalysisError::InvalidTree);
    }
    if tree.node(node).is_none() {
        return Err(AnalysisError::UnknownNode(node));
    }
    Ok(conflict_graph_unchecked(tree, node))
}

/// Construction without re-validating the tree; `node` must be in range.
fn conflict_graph_unchecked(tree: &ResolutionTree, node: NodeId) -> ConflictGraph {
    let clause = tree.node(node).expect("caller checked").clause();
    let literals: Vec<Literal> = clause.literals().to_vec();
    let index: BTreeMap<Literal, u32> = literals
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32))
        .collect();
    let mut edges = BTreeSet::new();
    for leaf in subtree_leaf_clauses(tree, node) {
        let members: Vec<u32> = literals
            .iter()
            .filter(|&&l| leaf.contains(l))
            .map(|l| index[l])
            .collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let (u, v) = (members[i].min(members[j]), members[i].max(members[j]));
                edges.insert((u, v));
            }
        }
    }
    let graph = Graph::new(literals.len() as u32, edges).expect("indices in range");
    ConflictGraph { literals, graph }
}

/// Leaf clauses in the subtree rooted at `node`, in depth-first order.
pub fn subtree_leaf_clauses(tree: &ResolutionTree, node: NodeId) -> Vec<&Clause> {
    let mut leaves = Vec::new();
    let mut stack = alloc::vec![node];
    while let Some(id) = stack.pop() {
        match tree.node(id).expect("validated tree") {
            TreeNode::Leaf { clause } => leaves.push(clause),
            TreeNode::Resolvent { left, right, .. } => {
                stack.push(*right);
                stack.push(*left);
            }
        }
    }
    leaves
}

/// Checks `kappa_i(descendant) <= kappa_i(ancestor) + dist` for all
/// `i = 1..=k`, where k is the formula's width and dist the tree distance.
pub fn kappa_lipschitz_check(
    tree: &ResolutionTree,
    formula: &CnfFormula,
    ancestor: NodeId,
    descendant: NodeId,
    cap: u32,
) -> Result<bool, AnalysisError> {
    let report = check_tree(tree, formula)?;
    if !report.valid {
        return Err(AnalysisError::InvalidTree);
    }
    for id in [ancestor, descendant] {
        if tree.node(id).is_none() {
            return Err(AnalysisError::UnknownNode(id));
        }
    }
    let dist = tree_distance(tree, ancestor, descendant).ok_or(AnalysisError::NotAnAncestor {
        ancestor,
        descendant,
    })?;
    let k = formula
        .uniform_width()
        .unwrap_or_else(|| formula.max_width()) as u32;
    let g_ancestor = conflict_graph_unchecked(tree, ancestor);
    let g_descendant = conflict_graph_unchecked(tree, descendant);
    for i in 1..=k.max(1) {
        let ka = kappa_with_cap(&g_ancestor.graph, i, cap)?;
        let kd = kappa_with_cap(&g_descendant.graph, i, cap)?;
        if kd > ka + dist {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Edges on the tree path from `ancestor` down to `descendant`, if the
/// ancestor relation holds.
pub fn tree_distance(tree: &ResolutionTree, ancestor: NodeId, descendant: NodeId) -> Option<u32> {
    // Parent map of the reachable subtree.
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut stack = alloc::vec![tree.root()];
    while let Some(id) = stack.pop() {
        if let Some(TreeNode::Resolvent { left, right, .. }) = tree.node(id) {
            parent.insert(*left, id);
            parent.insert(*right, id);
            stack.push(*right);
            stack.push(*left);
        }
    }
    let mut current = descendant;
    let mut dist = 0u32;
    loop {
        if current == ancestor {
            return Some(dist);
        }
        match parent.get(&current) {
            Some(&p) => {
                current = p;
                dist += 1;
            }
            None => return None,
        }
    }
}
