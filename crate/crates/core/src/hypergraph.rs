//! Uniform hypergraphs with linearity and richness predicates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge of cardinality {found} in a {expected}-uniform hypergraph")]
    NonUniformEdge { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: u32, vertex_count: u32 },
    #[error("vertex {0} repeated within an edge")]
    RepeatedVertex(u32),
}

/// A k-uniform hypergraph on vertices `0..n`. Edges are stored as sorted
/// vertex vectors with set semantics (duplicate edges collapse).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: u32,
    uniformity: usize,
    edges: BTreeSet<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(
        vertex_count: u32,
        uniformity: usize,
        edges: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Hypergraph, HypergraphError> {
        let mut set = BTreeSet::new();
        for mut edge in edges {
            if edge.len() != uniformity {
                return Err(HypergraphError::NonUniformEdge {
                    expected: uniformity,
                    found: edge.len(),
                });
            }
            edge.sort_unstable();
            for pair in edge.windows(2) {
                if pair[0] == pair[1] {
                    return Err(HypergraphError::RepeatedVertex(pair[0]));
                }
            }
            if let Some(&v) = edge.last() {
                if v >= vertex_count {
                    return Err(HypergraphError::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            set.insert(edge);
        }
        Ok(Hypergraph {
            vertex_count,
            uniformity,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.iter().map(|e| e.as_slice())
    }

    pub fn degree(&self, vertex: u32) -> usize {
        self.edges
            .iter()
            .filter(|e| e.binary_search(&vertex).is_ok())
            .count()
    }

    /// Degree of every vertex, indexed by vertex id.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = alloc::vec![0usize; self.vertex_count as usize];
        for edge in &self.edges {
            for &v in edge {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// Any two distinct edges intersect in at most one vertex.
    pub fn is_linear(&self) -> bool {
        self.is_b_linear(1)
    }

    /// Any two distinct edges intersect in at most `b` vertices.
    pub fn is_b_linear(&self, b: usize) -> bool {
        self.b_linearity_violation(b).is_none()
    }

    /// First edge pair whose intersection exceeds `b`, in canonical order.
    pub fn b_linearity_violation(&self, b: usize) -> Option<(&[u32], &[u32])> {
        let edges: Vec<&Vec<u32>> = self.edges.iter().collect();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                if intersection_size(edges[i], edges[j]) > b {
                    return Some((edges[i], edges[j]));
                }
            }
        }
        None
    }

    /// At least `j` vertices have degree at least `d`.
    pub fn is_rich(&self, j: usize, d: usize) -> bool {
        self.degrees().iter().filter(|&&deg| deg >= d).count() >= j
    }

    /// Pair-counting limit on a linear k-uniform hypergraph:
    /// `C(n,2) / C(k,2)` edges, each edge occupying `C(k,2)` vertex pairs
    /// at most once. `None` for uniformity below 2.
    pub fn linear_edge_limit(&self) -> Option<u64> {
        if self.uniformity < 2 {
            return None;
        }
        let n = self.vertex_count as u64;
        let k = self.uniformity as u64;
        Some((n * (n - 1) / 2) / (k * (k - 1) / 2))
    }

    /// Checks the pair-counting bound; trivially true for uniformity < 2.
    pub fn satisfies_linear_edge_limit(&self) -> bool {
        match self.linear_edge_limit() {
            Some(limit) => self.edge_count() as u64 <= limit,
            None => true,
        }
    }
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
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
