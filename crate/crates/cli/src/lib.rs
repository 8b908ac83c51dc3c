//! File formats and command implementations for the `lincnf` binary.
//!
//! Three line-based formats, all LF-terminated and canonical (parsing a
//! serialized value and serializing again is byte-identical):
//!
//! - DIMACS CNF: `c meta key=value` comments, a `p cnf <vars> <clauses>`
//!   header, then one clause per line as sorted signed integers ending
//!   in `0`. The variable universe is `1..=vars`.
//! - HG hypergraph: `h <vertices> <edges> <uniformity>` header, then one
//!   edge per line as sorted vertex ids.
//! - Resolution tree: `t <nodes> <root>` header, then one node per line,
//!   `<id> LEAF <lits...> 0` or `<id> RES <pivot> <left> <right>
//!   <lits...> 0`, with ids equal to the line position so files stream.
//!
//! Exit-code contract: 0 = property holds / verdict reached, 1 =
//! property fails, 2 = input error, 3 = budget exhausted.

pub mod commands;
pub mod dimacs;
pub mod hg;
pub mod tree_format;

/// Every run is reproducible by default: this seed is used wherever none
/// is given.
pub const DEFAULT_SEED: u64 = 42;

pub use commands::{
    cmd_analyze, cmd_check_tree, cmd_gen, cmd_solve, cmd_verify, AnalyzeOptions, GenKind,
    GenOptions, SolveOptions, VerifyLevel,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    BadClause {
        line: usize,
        source: lincnf_core::cnf::CnfError,
    },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
}

impl FormatError {
    fn syntax(line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line,
            message: message.into(),
        }
    }
}
