//! Command implementations behind the `lincnf` binary.
//!
//! Each command returns its stdout text and an exit code, so tests can
//! drive them in-process; file outputs are written as side effects.
//! Reports are machine-readable `key=value` lines with `# ` prefixed
//! human summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;

use lincnf_core::analysis::{
    conflict_graph, kappa_profile, random_walk_experiment, rich_bound_check, size_bounds, weight,
    BoundKind, WalkConfig,
};
use lincnf_core::cnf::{CnfFormula, LinearityMode, Var};
use lincnf_core::constructions::{
    b_linear_hypergraph, complete_kcnf, kuzjurin_hypergraph, recursive_unsat_linear_capped,
    search_unsat_signing, signing_density_sufficient, SigningConfig, TrialOutcome,
    VerificationMethod,
};
use lincnf_core::exact::Capped;
use lincnf_core::galois::FieldSpec;
use lincnf_core::resolution::{
    check_tree, dpll_refute, BranchPolicy, DpllConfig, DpllOutcome, NodeId, SplitMode,
};

use crate::{dimacs, hg, tree_format, FormatError};

/// Exit codes: 0 holds/verdict, 1 property fails, 2 input error,
/// 3 budget exhausted.
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
}

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            exit_code: 2,
            message: message.into(),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        CliError::input(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn deliver(content: String, output: Option<&Path>, stdout: &mut String) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => {
            stdout.push_str(&content);
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Complete,
    Recursive,
    Kuzjurin,
    Blinear,
    Signed,
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub kind: GenKind,
    pub k: u32,
    pub q: Option<u64>,
    pub b: Option<u32>,
    pub seed: u64,
    pub max_trials: u32,
    pub model_count_cap: u32,
    pub decision_budget: u64,
    pub recursion_cap: u32,
    pub output: Option<PathBuf>,
}

pub fn cmd_gen(opts: &GenOptions) -> Result<CommandResult, CliError> {
    let mut stdout = String::new();
    match opts.kind {
        GenKind::Complete => {
            let vars: Vec<Var> = (1..=opts.k).map(Var::new).collect();
            let formula = complete_kcnf(&vars).map_err(|e| CliError::input(e.to_string()))?;
            let mut meta = base_meta("complete", opts.k);
            describe_formula(&mut meta, &formula);
            attach_verification(&mut meta, &formula, opts.model_count_cap);
            deliver(
                dimacs::write_dimacs(&formula, &meta),
                opts.output.as_deref(),
                &mut stdout,
            )?;
        }
        GenKind::Recursive => {
            let formula = recursive_unsat_linear_capped(opts.k, opts.recursion_cap)
                .map_err(|e| CliError::input(e.to_string()))?;
            let mut meta = base_meta("recursive", opts.k);
            describe_formula(&mut meta, &formula);
            meta.insert(
                "linearity".into(),
                if formula.linearity(1, LinearityMode::Strict) {
                    "strict-verified".into()
                } else {
                    "violated".into()
                },
            );
            attach_verification(&mut meta, &formula, opts.model_count_cap);
            deliver(
                dimacs::write_dimacs(&formula, &meta),
                opts.output.as_deref(),
                &mut stdout,
            )?;
        }
        GenKind::Kuzjurin | GenKind::Blinear => {
            let q = opts
                .q
                .ok_or_else(|| CliError::input("this construction needs -q"))?;
            let b = match opts.kind {
                GenKind::Kuzjurin => 1,
                _ => opts
                    .b
                    .ok_or_else(|| CliError::input("this construction needs -b"))?,
            };
            let h = if b == 1 {
                kuzjurin_hypergraph(opts.k as usize, q)
            } else {
                b_linear_hypergraph(opts.k as usize, q, b as usize)
            }
            .map_err(|e| CliError::input(e.to_string()))?;
            let mut meta = base_meta(if b == 1 { "kuzjurin" } else { "blinear" }, opts.k);
            meta.insert("q".into(), q.to_string());
            meta.insert("b".into(), b.to_string());
            let field = FieldSpec::new(q).expect("construction validated q");
            meta.insert(
                "field_modulus".into(),
                field
                    .modulus()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            meta.insert(
                "evaluation_points".into(),
                format!("canonical-indices-0..{}", opts.k),
            );
            meta.insert("vertices".into(), h.vertex_count().to_string());
            meta.insert("edges".into(), h.edge_count().to_string());
            meta.insert(
                "b_linearity".into(),
                if h.is_b_linear(b as usize) {
                    "verified".into()
                } else {
                    "violated".to_string()
                },
            );
            deliver(hg::write_hg(&h, &meta), opts.output.as_deref(), &mut stdout)?;
        }
        GenKind::Signed => {
            let q = opts
                .q
                .ok_or_else(|| CliError::input("this construction needs -q"))?;
            let h = kuzjurin_hypergraph(opts.k as usize, q)
                .map_err(|e| CliError::input(e.to_string()))?;
            if !signing_density_sufficient(&h) {
                eprintln!(
                    "warning: edge density m/n below 2^k; unsatisfiable signings are not expected"
                );
            }
            let config = SigningConfig {
                base_seed: opts.seed,
                max_trials: opts.max_trials,
                model_count_cap: opts.model_count_cap,
                decision_budget: opts.decision_budget,
            };
            match search_unsat_signing(&h, &config) {
                Ok(success) => {
                    let mut meta = base_meta("signed", opts.k);
                    meta.insert("q".into(), q.to_string());
                    meta.insert("base_seed".into(), opts.seed.to_string());
                    meta.insert("trial_index".into(), success.trial.trial_index.to_string());
                    meta.insert("trial_seed".into(), success.trial.seed.to_string());
                    for prior in &success.prior_trials {
                        meta.insert(
                            format!("trial_{:03}", prior.trial_index),
                            match &prior.outcome {
                                TrialOutcome::Sat(_) => match prior.models_found {
                                    Some(n) => format!("sat-{n}-models"),
                                    None => "sat".to_string(),
                                },
                                TrialOutcome::Unverified => "unverified".to_string(),
                                TrialOutcome::UnsatVerified(_) => unreachable!(),
                            },
                        );
                    }
                    meta.insert(
                        format!("trial_{:03}", success.trial.trial_index),
                        "unsat-verified".to_string(),
                    );
                    meta.insert(
                        "verification".into(),
                        match success.trial.outcome {
                            TrialOutcome::UnsatVerified(VerificationMethod::ModelCount) => {
                                "model-count-0".into()
                            }
                            TrialOutcome::UnsatVerified(VerificationMethod::DpllRefutation) => {
                                "dpll-tree-checked".to_string()
                            }
                            _ => unreachable!("search returns verified trials"),
                        },
                    );
                    describe_formula(&mut meta, &success.formula);
                    deliver(
                        dimacs::write_dimacs(&success.formula, &meta),
                        opts.output.as_deref(),
                        &mut stdout,
                    )?;
                }
                Err(exhausted) => {
                    let mut transcript = String::new();
                    for trial in &exhausted.trials {
                        let _ = writeln!(
                            transcript,
                            "trial {} (seed {}): {}",
                            trial.trial_index,
                            trial.seed,
                            match &trial.outcome {
                                TrialOutcome::Sat(_) => "satisfiable",
                                TrialOutcome::Unverified => "unverified (budget)",
                                TrialOutcome::UnsatVerified(_) => "unsat",
                            }
                        );
                    }
                    return Err(CliError {
                        exit_code: 1,
                        message: format!("{exhausted}\n{transcript}"),
                    });
                }
            }
        }
    }
    Ok(CommandResult {
        exit_code: 0,
        stdout,
    })
}

fn base_meta(kind: &str, k: u32) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("kind".to_string(), kind.to_string()),
        ("k".to_string(), k.to_string()),
    ])
}

fn describe_formula(meta: &mut BTreeMap<String, String>, formula: &CnfFormula) {
    meta.insert("clauses".into(), formula.clause_count().to_string());
    meta.insert("variables".into(), formula.var_count().to_string());
}

fn attach_verification(meta: &mut BTreeMap<String, String>, formula: &CnfFormula, cap: u32) {
    if formula.var_count() as u64 <= cap as u64 {
        let count = formula
            .count_models_with_cap(cap)
            .expect("cap checked above");
        meta.insert(
            "verification".into(),
            if count == 0 {
                "model-count-0".into()
            } else {
                format!("model-count-{count}")
            },
        );
    } else {
        meta.insert("verification".into(), "not-attempted".into());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Linear,
    Weak,
    B,
}

pub fn cmd_verify(path: &Path, level: VerifyLevel, b: usize) -> Result<CommandResult, CliError> {
    let text = read_file(path)?;
    let (formula, _) = dimacs::parse_dimacs(&text)?;
    let (mode, bound, label) = match level {
        VerifyLevel::Linear => (LinearityMode::Strict, 1, "linear".to_string()),
        VerifyLevel::Weak => (LinearityMode::Weak, 1, "weakly-linear".to_string()),
        VerifyLevel::B => (LinearityMode::Strict, b, format!("{b}-linear")),
    };
    let mut stdout = String::new();
    let _ = writeln!(stdout, "level={label}");
    match formula.linearity_violation(bound, mode) {
        None => {
            let _ = writeln!(stdout, "holds=true");
            Ok(CommandResult {
                exit_code: 0,
                stdout,
            })
        }
        Some((c, d)) => {
            let _ = writeln!(stdout, "holds=false");
            let _ = writeln!(stdout, "violating_pair={c} {d}");
            Ok(CommandResult {
                exit_code: 1,
                stdout,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub mode: SplitMode,
    pub policy: BranchPolicy,
    pub seed: u64,
    pub decision_budget: u64,
    pub emit_tree: Option<PathBuf>,
}

pub fn cmd_solve(path: &Path, opts: &SolveOptions) -> Result<CommandResult, CliError> {
    let text = read_file(path)?;
    let (formula, _) = dimacs::parse_dimacs(&text)?;
    let config = DpllConfig {
        mode: opts.mode,
        policy: opts.policy,
        seed: opts.seed,
        decision_budget: opts.decision_budget,
    };
    let mut stdout = String::new();
    match dpll_refute(&formula, &config) {
        DpllOutcome::Sat { model } => {
            let _ = writeln!(stdout, "s SATISFIABLE");
            let mut line = String::from("v");
            for (var, value) in model.iter() {
                let _ = write!(
                    line,
                    " {}",
                    if value {
                        var.id() as i64
                    } else {
                        -(var.id() as i64)
                    }
                );
            }
            let _ = writeln!(stdout, "{line} 0");
            Ok(CommandResult {
                exit_code: 0,
                stdout,
            })
        }
        DpllOutcome::Unsat { tree, stats } => {
            let report = check_tree(&tree, &formula).expect("emitted trees are well formed");
            assert!(report.valid, "emitted refutation must check out");
            let _ = writeln!(stdout, "s UNSATISFIABLE");
            let _ = writeln!(stdout, "decisions={}", stats.decisions);
            let _ = writeln!(stdout, "propagations={}", stats.propagations);
            let _ = writeln!(stdout, "leaves={}", stats.leaf_count);
            let _ = writeln!(stdout, "nodes={}", stats.node_count);
            let _ = writeln!(stdout, "depth={}", report.depth);
            let _ = writeln!(stdout, "strict={}", report.strict);
            let _ = writeln!(stdout, "regular={}", report.regular);
            if let Some(tree_path) = &opts.emit_tree {
                let meta = BTreeMap::from([
                    ("leaves".to_string(), stats.leaf_count.to_string()),
                    ("decisions".to_string(), stats.decisions.to_string()),
                ]);
                std::fs::write(tree_path, tree_format::write_tree(&tree, &meta))
                    .map_err(|e| CliError::input(format!("{}: {e}", tree_path.display())))?;
            }
            Ok(CommandResult {
                exit_code: 0,
                stdout,
            })
        }
        DpllOutcome::BudgetExceeded { stats } => {
            let _ = writeln!(stdout, "s UNKNOWN");
            let _ = writeln!(stdout, "decisions={}", stats.decisions);
            Ok(CommandResult {
                exit_code: 3,
                stdout,
            })
        }
    }
}

pub fn cmd_check_tree(tree_path: &Path, formula_path: &Path) -> Result<CommandResult, CliError> {
    let tree_text = read_file(tree_path)?;
    let formula_text = read_file(formula_path)?;
    let (tree, _) = tree_format::parse_tree(&tree_text)?;
    let (formula, _) = dimacs::parse_dimacs(&formula_text)?;
    let report =
        check_tree(&tree, &formula).map_err(|e| CliError::input(format!("malformed tree: {e}")))?;
    let mut stdout = String::new();
    let _ = writeln!(stdout, "valid={}", report.valid);
    let _ = writeln!(stdout, "strict={}", report.strict);
    let _ = writeln!(stdout, "regular={}", report.regular);
    let _ = writeln!(stdout, "leaves={}", report.leaf_count);
    let _ = writeln!(stdout, "depth={}", report.depth);
    for id in &report.leaves_not_in_formula {
        let _ = writeln!(stdout, "foreign_leaf={id}");
    }
    Ok(CommandResult {
        exit_code: if report.valid { 0 } else { 1 },
        stdout,
    })
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub input: Option<PathBuf>,
    pub degrees: bool,
    pub rich: Option<u32>,
    pub weight: bool,
    pub walk: bool,
    pub kappa: bool,
    pub bounds: bool,
    pub k: Option<u32>,
    pub b: u32,
    pub walk_len: u32,
    pub trials: u32,
    pub seed: u64,
    pub tree: Option<PathBuf>,
    pub kappa_cap: u32,
}

pub fn cmd_analyze(opts: &AnalyzeOptions) -> Result<CommandResult, CliError> {
    let mut stdout = String::new();
    let mut any_check_failed = false;

    let formula: Option<CnfFormula> = match &opts.input {
        Some(path) if opts.degrees || opts.weight || opts.walk || opts.kappa => {
            let text = read_file(path)?;
            Some(dimacs::parse_dimacs(&text)?.0)
        }
        _ => None,
    };
    let need_formula = |f: &Option<CnfFormula>| {
        f.clone()
            .ok_or_else(|| CliError::input("this analysis needs a formula input file"))
    };

    if opts.degrees {
        let f = need_formula(&formula)?;
        let stats = f.degree_stats();
        let _ = writeln!(stdout, "degrees.max_degree={}", stats.max_degree());
        let _ = writeln!(stdout, "degrees.max_occurrence={}", stats.max_occurrence());
        let _ = writeln!(
            stdout,
            "degrees.max_k_minus_1={}",
            stats.max_k_minus_1_degree()
        );
        let _ = writeln!(
            stdout,
            "# max variable degree {} over {} variables",
            stats.max_degree(),
            f.var_count()
        );
    }

    if let Some(d) = opts.rich {
        let path = opts
            .input
            .as_ref()
            .ok_or_else(|| CliError::input("richness needs a hypergraph input file"))?;
        let text = read_file(path)?;
        let (h, _) = hg::parse_hg(&text)?;
        let check = rich_bound_check(&h, d).map_err(|e| CliError::input(format!("rich: {e}")))?;
        let _ = writeln!(stdout, "rich.d={d}");
        let _ = writeln!(stdout, "rich.is_rich={}", check.is_rich);
        let _ = writeln!(stdout, "rich.edges={}", check.edge_count);
        let _ = writeln!(stdout, "rich.bound={}", check.bound);
        let _ = writeln!(stdout, "rich.pass={}", check.pass);
        any_check_failed |= !check.pass;
    }

    if opts.weight {
        let f = need_formula(&formula)?;
        let k = opts
            .k
            .map(|k| k as usize)
            .or_else(|| f.uniform_width())
            .unwrap_or_else(|| f.max_width());
        let _ = writeln!(stdout, "weight.k={k}");
        let _ = writeln!(stdout, "weight.value={}", weight(&f, k));
    }

    if opts.walk {
        let f = need_formula(&formula)?;
        let k = f
            .uniform_width()
            .ok_or_else(|| CliError::input("walk: the formula must be uniform"))?;
        let stats = random_walk_experiment(
            &f,
            k,
            &WalkConfig {
                steps: opts.walk_len,
                trials: opts.trials,
                seed: opts.seed,
            },
        )
        .map_err(|e| CliError::input(format!("walk: {e}")))?;
        let _ = writeln!(stdout, "walk.steps={}", stats.steps);
        let _ = writeln!(stdout, "walk.trials={}", stats.trials);
        let _ = writeln!(stdout, "walk.mean_final_weight={}", stats.mean_final_weight);
        let _ = writeln!(stdout, "walk.max_weight={}", stats.max_weight);
        let _ = writeln!(
            stdout,
            "walk.max_k_minus_1_degree={}",
            stats.max_k_minus_1_degree
        );
        let _ = writeln!(
            stdout,
            "walk.hitting_empty_fraction={}",
            stats.walks_hitting_empty_clause as f64 / stats.trials.max(1) as f64
        );
        let _ = writeln!(stdout, "walk.dk1_within_2i={}", stats.dk1_within_2i);
        let _ = writeln!(
            stdout,
            "walk.dk1_growth_within_2={}",
            stats.dk1_growth_within_2
        );
        let _ = writeln!(
            stdout,
            "walk.step_inequality_ok={}",
            stats.step_inequality_ok
        );
        let _ = writeln!(
            stdout,
            "walk.mean_within_expectation={}",
            stats.mean_within_expectation
        );
        let _ = writeln!(
            stdout,
            "# restriction-walk statistics under the degree-first policy"
        );
        any_check_failed |= !(stats.dk1_within_2i
            && stats.dk1_growth_within_2
            && stats.step_inequality_ok
            && stats.mean_within_expectation);
    }

    if opts.kappa {
        let f = need_formula(&formula)?;
        let tree_path = opts
            .tree
            .as_ref()
            .ok_or_else(|| CliError::input("kappa needs --tree"))?;
        let (tree, _) = tree_format::parse_tree(&read_file(tree_path)?)?;
        let k = f.uniform_width().unwrap_or_else(|| f.max_width()) as u32;
        // Root plus the first nodes in pool order.
        let mut nodes: Vec<NodeId> = vec![tree.root()];
        nodes.extend((0..tree.len().min(15)).map(|i| NodeId(i as u32)));
        nodes.dedup();
        for id in nodes {
            let cg = conflict_graph(&tree, &f, id)
                .map_err(|e| CliError::input(format!("kappa: {e}")))?;
            match kappa_profile(&cg.graph, k.max(1), opts.kappa_cap) {
                Ok(profile) => {
                    let values: Vec<String> =
                        profile.values().iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(stdout, "kappa.{id}={}", values.join(","));
                }
                Err(e) => return Err(CliError::input(format!("kappa at {id}: {e}"))),
            }
        }
    }

    if opts.bounds {
        let k = opts.k.ok_or_else(|| CliError::input("bounds needs -k"))?;
        if k < 2 {
            return Err(CliError::input("bounds needs k >= 2"));
        }
        let report = size_bounds(k, opts.b);
        let _ = writeln!(stdout, "bounds.k={k}");
        let _ = writeln!(stdout, "bounds.b={}", opts.b);
        let _ = writeln!(stdout, "bounds.lower_clauses={}", report.lower_clause_bound);
        let _ = writeln!(
            stdout,
            "bounds.lower_clauses_approx={:.6}",
            report.lower_clause_bound.to_f64().unwrap_or(f64::INFINITY)
        );
        let _ = writeln!(stdout, "bounds.upper_clauses={}", report.upper_clause_bound);
        match &report.treelike_bound {
            Capped::Value(v) => {
                let _ = writeln!(stdout, "bounds.treelike_leaves={v}");
            }
            Capped::Overflow { bits_needed } => {
                let _ = writeln!(stdout, "bounds.treelike_leaves=capped({bits_needed} bits)");
            }
        }
        let _ = writeln!(stdout, "bounds.focc_lower={}", report.focc_lower);
        let _ = writeln!(
            stdout,
            "bounds.focc_lower_approx={:.6}",
            report.focc_lower.to_f64().unwrap_or(f64::INFINITY)
        );
        for (i, survey) in report.f_survey.iter().enumerate() {
            let _ = writeln!(
                stdout,
                "bounds.survey.{i}={} [{}] value={:.6} ({})",
                survey.label,
                survey.citation,
                survey.value.to_f64().unwrap_or(f64::INFINITY),
                match survey.kind {
                    BoundKind::Lower => "lower",
                    BoundKind::Upper => "upper",
                    BoundKind::Exact => "exact",
                }
            );
        }
        let _ = writeln!(
            stdout,
            "# any weakly {}-linear {k}-CNF formula with at most {:.3} clauses is satisfiable",
            opts.b,
            report.lower_clause_bound.to_f64().unwrap_or(f64::INFINITY)
        );
    }

    Ok(CommandResult {
        exit_code: if any_check_failed { 1 } else { 0 },
        stdout,
    })
}
