//! Streamable resolution tree format.
//!
//! One node per line in pool order; children always precede their parent
//! when the tree was emitted by the refuter, so a reader can check
//! resolvents on the fly. Node ids equal line positions and the root id
//! sits in the header.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lincnf_core::cnf::Var;
use lincnf_core::resolution::{NodeId, ResolutionTree, TreeNode};

use crate::FormatError;

pub fn write_tree(tree: &ResolutionTree, meta: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        writeln!(out, "c meta {key}={value}").expect("string write");
    }
    writeln!(out, "t {} {}", tree.len(), tree.root().0).expect("string write");
    for (idx, node) in tree.nodes().iter().enumerate() {
        match node {
            TreeNode::Leaf { clause } => {
                write!(out, "{idx} LEAF").expect("string write");
                for lit in clause.literals() {
                    write!(out, " {}", lit.to_dimacs()).expect("string write");
                }
                out.push_str(" 0\n");
            }
            TreeNode::Resolvent {
                clause,
                pivot,
                left,
                right,
            } => {
                write!(out, "{idx} RES {} {} {}", pivot.id(), left.0, right.0)
                    .expect("string write");
                for lit in clause.literals() {
                    write!(out, " {}", lit.to_dimacs()).expect("string write");
                }
                out.push_str(" 0\n");
            }
        }
    }
    out
}

pub fn parse_tree(input: &str) -> Result<(ResolutionTree, BTreeMap<String, String>), FormatError> {
    let mut meta = BTreeMap::new();
    let mut header: Option<(usize, u32)> = None;
    let mut nodes: Vec<TreeNode> = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('c') {
            if let Some(entry) = comment.trim_start().strip_prefix("meta ") {
                if let Some((key, value)) = entry.split_once('=') {
                    meta.insert(key.trim().to_string(), value.to_string());
                }
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("t ") {
            if header.is_some() {
                return Err(FormatError::syntax(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(FormatError::syntax(line_no, "expected `t <nodes> <root>`"));
            }
            let count = parts[0]
                .parse()
                .map_err(|_| FormatError::syntax(line_no, "bad node count"))?;
            let root = parts[1]
                .parse()
                .map_err(|_| FormatError::syntax(line_no, "bad root id"))?;
            header = Some((count, root));
            continue;
        }
        if header.is_none() {
            return Err(FormatError::MissingHeader("t"));
        }
        let mut tokens = trimmed.split_whitespace();
        let id: usize = tokens
            .next()
            .ok_or_else(|| FormatError::syntax(line_no, "missing node id"))?
            .parse()
            .map_err(|_| FormatError::syntax(line_no, "bad node id"))?;
        if id != nodes.len() {
            return Err(FormatError::syntax(
                line_no,
                format!("node id {id} out of order; expected {}", nodes.len()),
            ));
        }
        let kind = tokens
            .next()
            .ok_or_else(|| FormatError::syntax(line_no, "missing node kind"))?;
        let node = match kind {
            "LEAF" => TreeNode::Leaf {
                clause: read_clause(&mut tokens, line_no)?,
            },
            "RES" => {
                let pivot: u32 = next_number(&mut tokens, line_no, "pivot variable")?;
                if pivot == 0 {
                    return Err(FormatError::syntax(
                        line_no,
                        "pivot variable must be positive",
                    ));
                }
                let left: u32 = next_number(&mut tokens, line_no, "left child")?;
                let right: u32 = next_number(&mut tokens, line_no, "right child")?;
                TreeNode::Resolvent {
                    pivot: Var::new(pivot),
                    left: NodeId(left),
                    right: NodeId(right),
                    clause: read_clause(&mut tokens, line_no)?,
                }
            }
            other => {
                return Err(FormatError::syntax(
                    line_no,
                    format!("unknown node kind `{other}`"),
                ))
            }
        };
        if tokens.next().is_some() {
            return Err(FormatError::syntax(line_no, "trailing tokens after clause"));
        }
        nodes.push(node);
    }

    let (count, root) = header.ok_or(FormatError::MissingHeader("t"))?;
    if nodes.len() != count {
        return Err(FormatError::syntax(
            input.lines().count(),
            format!(
                "header declares {count} nodes but {} were read",
                nodes.len()
            ),
        ));
    }
    Ok((ResolutionTree::new(nodes, NodeId(root)), meta))
}

fn next_number<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<u32, FormatError> {
    tokens
        .next()
        .ok_or_else(|| FormatError::syntax(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| FormatError::syntax(line, format!("bad {what}")))
}

fn read_clause<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<lincnf_core::cnf::Clause, FormatError> {
    let mut codes = Vec::new();
    for token in tokens.by_ref() {
        let code: i32 = token
            .parse()
            .map_err(|_| FormatError::syntax(line, format!("bad literal `{token}`")))?;
        if code == 0 {
            return lincnf_core::cnf::Clause::from_dimacs(&codes)
                .map_err(|source| FormatError::BadClause { line, source });
        }
        codes.push(code);
    }
    Err(FormatError::syntax(line, "clause not terminated by 0"))
}
