//! Line-based uniform hypergraph format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lincnf_core::hypergraph::Hypergraph;

use crate::FormatError;

pub fn write_hg(h: &Hypergraph, meta: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        writeln!(out, "c meta {key}={value}").expect("string write");
    }
    writeln!(
        out,
        "h {} {} {}",
        h.vertex_count(),
        h.edge_count(),
        h.uniformity()
    )
    .expect("string write");
    for edge in h.edges() {
        let mut first = true;
        for v in edge {
            if !first {
                out.push(' ');
            }
            write!(out, "{v}").expect("string write");
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn parse_hg(input: &str) -> Result<(Hypergraph, BTreeMap<String, String>), FormatError> {
    let mut meta = BTreeMap::new();
    let mut header: Option<(u32, usize, usize)> = None;
    let mut edges: Vec<Vec<u32>> = Vec::new();

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
        if let Some(rest) = trimmed.strip_prefix("h ") {
            if header.is_some() {
                return Err(FormatError::syntax(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(FormatError::syntax(line_no, "expected `h <n> <m> <k>`"));
            }
            let n = parts[0]
                .parse()
                .map_err(|_| FormatError::syntax(line_no, "bad vertex count"))?;
            let m = parts[1]
                .parse()
                .map_err(|_| FormatError::syntax(line_no, "bad edge count"))?;
            let k = parts[2]
                .parse()
                .map_err(|_| FormatError::syntax(line_no, "bad uniformity"))?;
            header = Some((n, m, k));
            continue;
        }
        let Some((_, _, k)) = header else {
            return Err(FormatError::MissingHeader("h"));
        };
        let edge: Vec<u32> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| FormatError::syntax(line_no, format!("bad vertex `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if edge.len() != k {
            return Err(FormatError::syntax(
                line_no,
                format!(
                    "edge of {} vertices in a {k}-uniform hypergraph",
                    edge.len()
                ),
            ));
        }
        edges.push(edge);
    }
    let (n, m, k) = header.ok_or(FormatError::MissingHeader("h"))?;
    if edges.len() != m {
        return Err(FormatError::syntax(
            input.lines().count(),
            format!("header declares {m} edges but {} were read", edges.len()),
        ));
    }
    let h = Hypergraph::new(n, k, edges)
        .map_err(|e| FormatError::syntax(input.lines().count(), e.to_string()))?;
    Ok((h, meta))
}
