//! DIMACS CNF reading and writing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lincnf_core::cnf::{Clause, CnfFormula, Var};

use crate::FormatError;

/// Serializes in canonical form: sorted metadata comments, the header,
/// then clauses in canonical order, one per line, literals ascending by
/// variable, each line terminated by ` 0`.
pub fn write_dimacs(formula: &CnfFormula, meta: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        writeln!(out, "c meta {key}={value}").expect("string write");
    }
    writeln!(
        out,
        "p cnf {} {}",
        formula.max_var_id(),
        formula.clause_count()
    )
    .expect("string write");
    for clause in formula.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).expect("string write");
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS text. Comment lines are skipped except `c meta k=v`,
/// which populate the returned metadata; the variable universe is
/// `1..=vars` from the header. Clauses may span lines; each ends at `0`.
pub fn parse_dimacs(input: &str) -> Result<(CnfFormula, BTreeMap<String, String>), FormatError> {
    let mut meta = BTreeMap::new();
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();

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
        if let Some(rest) = trimmed.strip_prefix("p ") {
            if header.is_some() {
                return Err(FormatError::syntax(line_no, "duplicate header"));
            }
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("cnf") {
                return Err(FormatError::syntax(line_no, "expected `p cnf`"));
            }
            let vars: u32 = parse_token(parts.next(), line_no, "variable count")?;
            let clause_count: usize = parse_token(parts.next(), line_no, "clause count")?;
            if parts.next().is_some() {
                return Err(FormatError::syntax(line_no, "trailing tokens after header"));
            }
            header = Some((vars, clause_count));
            continue;
        }
        let (vars, _) = header.ok_or(FormatError::MissingHeader("p cnf"))?;
        for token in trimmed.split_whitespace() {
            let code: i32 = token
                .parse()
                .map_err(|_| FormatError::syntax(line_no, format!("bad literal `{token}`")))?;
            if code == 0 {
                let clause =
                    Clause::from_dimacs(&pending).map_err(|source| FormatError::BadClause {
                        line: line_no,
                        source,
                    })?;
                clauses.push(clause);
                pending.clear();
            } else {
                if code.unsigned_abs() > vars {
                    return Err(FormatError::syntax(
                        line_no,
                        format!(
                            "variable {} beyond declared count {vars}",
                            code.unsigned_abs()
                        ),
                    ));
                }
                pending.push(code);
            }
        }
    }
    let (vars, clause_count) = header.ok_or(FormatError::MissingHeader("p cnf"))?;
    if !pending.is_empty() {
        return Err(FormatError::syntax(
            input.lines().count(),
            "unterminated clause at end of input",
        ));
    }
    if clauses.len() != clause_count {
        return Err(FormatError::syntax(
            input.lines().count(),
            format!(
                "header declares {clause_count} clauses but {} were read",
                clauses.len()
            ),
        ));
    }
    let mut formula = CnfFormula::new(clauses);
    formula.declare_vars((1..=vars).map(Var::new));
    Ok((formula, meta))
}

fn parse_token<T: std::str::FromStr>(
    token: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    token
        .ok_or_else(|| FormatError::syntax(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| FormatError::syntax(line, format!("bad {what}")))
}
