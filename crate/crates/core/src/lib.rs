//! Linear CNF formulas and their structure.
//!
//! A CNF formula is *linear* if any two distinct clauses share at most one
//! variable, and *weakly linear* if they share at most one literal; replacing
//! "one" by `b` gives the b-linear variants. Unsatisfiable linear formulas
//! exist for every clause width but are large and hard to refute by
//! splitting, and this crate provides the machinery to build and examine
//! them at desk scale:
//!
//! - [`cnf`]: literals, clauses, formulas, assignments, and the structural
//!   predicates (linearity levels, degrees, restriction, model counting).
//! - [`hypergraph`]: uniform hypergraphs, linearity and richness checks.
//! - [`galois`]: exact arithmetic over GF(p^e) and Gaussian elimination.
//! - [`constructions`]: complete formulas, the recursive unsatisfiable
//!   linear construction, Vandermonde hypergraphs over GF(q), and random
//!   signing with verified-unsatisfiability search.
//! - [`resolution`]: resolvents, resolution trees, tree checking, and a
//!   DPLL refuter that emits checkable trees.
//! - [`analysis`]: weight functions and restriction walks, conflict graphs
//!   and clique-removal numbers, and exact bound calculators.
//! - [`exact`]: arbitrary-precision helpers (dyadic intervals, roots,
//!   bracketed constants) backing the bound calculators.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line live in the companion `lincnf-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod cnf;
pub mod constructions;
pub mod exact;
pub mod galois;
pub mod hypergraph;
pub mod resolution;

pub use cnf::{Assignment, Clause, CnfFormula, DegreeStats, LinearityMode, Literal, Var};
pub use hypergraph::Hypergraph;
