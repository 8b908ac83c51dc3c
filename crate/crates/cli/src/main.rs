use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lincnf_cli::commands::{
    cmd_analyze, cmd_check_tree, cmd_gen, cmd_solve, cmd_verify, AnalyzeOptions, GenKind,
    GenOptions, SolveOptions, VerifyLevel,
};
use lincnf_cli::DEFAULT_SEED;
use lincnf_core::resolution::{BranchPolicy, SplitMode};

/// Constructions, refutation, and analysis of linear CNF formulas.
#[derive(Parser)]
#[command(name = "lincnf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate formulas and hypergraphs.
    Gen {
        #[command(subcommand)]
        kind: GenCommand,
    },
    /// Check a linearity level of a DIMACS formula.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        level: LevelArg,
        /// Intersection bound for --level b.
        #[arg(short, default_value_t = 1)]
        b: usize,
    },
    /// Decide a DIMACS formula by splitting, optionally emitting the
    /// refutation tree.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Pure)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Fixed)]
        policy: PolicyArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Decision budget; exhausted budget gives verdict UNKNOWN.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        emit_tree: Option<PathBuf>,
    },
    /// Validate a resolution tree against a formula.
    CheckTree {
        tree: PathBuf,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Structural measures and bound calculators.
    Analyze {
        file: Option<PathBuf>,
        #[arg(long)]
        degrees: bool,
        /// Richness check at the given degree (hypergraph input).
        #[arg(long)]
        rich: Option<u32>,
        #[arg(long)]
        weight: bool,
        #[arg(long)]
        walk: bool,
        /// Clique-removal profiles of conflict graphs (needs --tree).
        #[arg(long)]
        kappa: bool,
        #[arg(long)]
        bounds: bool,
        #[arg(short)]
        k: Option<u32>,
        #[arg(short, default_value_t = 1)]
        b: u32,
        /// Walk length.
        #[arg(short = 'l', long, default_value_t = 4)]
        len: u32,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        kappa_cap: u32,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// All sign patterns over k variables.
    Complete {
        #[arg(short)]
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The recursive unsatisfiable linear construction.
    Recursive {
        #[arg(short)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        cap: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Linear hypergraph over GF(q) with kq vertices and q^2 edges.
    Kuzjurin {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        q: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// b-linear hypergraph over GF(q) with q^(1+b) edges.
    Blinear {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        q: u64,
        #[arg(short)]
        b: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomly signed hypergraph, retried to verified unsatisfiability.
    Signed {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_trials: u32,
        /// Variable cap for exhaustive model-count verification.
        #[arg(long, default_value_t = 26)]
        count_cap: u32,
        /// Decision budget for DPLL verification beyond the cap.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Linear,
    Weak,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pure,
    Unit,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Fixed,
    Degree,
    Random,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { kind } => {
            let opts = match kind {
                GenCommand::Complete { k, output } => GenOptions {
                    kind: GenKind::Complete,
                    k,
                    q: None,
                    b: None,
                    seed: DEFAULT_SEED,
                    max_trials: 64,
                    model_count_cap: 26,
                    decision_budget: 1_000_000,
                    recursion_cap: 3,
                    output,
                },
                GenCommand::Recursive { k, cap, output } => GenOptions {
                    kind: GenKind::Recursive,
                    k,
                    q: None,
                    b: None,
                    seed: DEFAULT_SEED,
                    max_trials: 64,
                    model_count_cap: 26,
                    decision_budget: 1_000_000,
                    recursion_cap: cap,
                    output,
                },
                GenCommand::Kuzjurin { k, q, output } => GenOptions {
                    kind: GenKind::Kuzjurin,
                    k,
                    q: Some(q),
                    b: None,
                    seed: DEFAULT_SEED,
                    max_trials: 64,
                    model_count_cap: 26,
                    decision_budget: 1_000_000,
                    recursion_cap: 3,
                    output,
                },
                GenCommand::Blinear { k, q, b, output } => GenOptions {
                    kind: GenKind::Blinear,
                    k,
                    q: Some(q),
                    b: Some(b),
                    seed: DEFAULT_SEED,
                    max_trials: 64,
                    model_count_cap: 26,
                    decision_budget: 1_000_000,
                    recursion_cap: 3,
                    output,
                },
                GenCommand::Signed {
                    k,
                    q,
                    seed,
                    max_trials,
                    count_cap,
                    budget,
                    output,
                } => GenOptions {
                    kind: GenKind::Signed,
                    k,
                    q: Some(q),
                    b: None,
                    seed,
                    max_trials,
                    model_count_cap: count_cap,
                    decision_budget: budget,
                    recursion_cap: 3,
                    output,
                },
            };
            cmd_gen(&opts)
        }
        Command::Verify { file, level, b } => {
            let level = match level {
                LevelArg::Linear => VerifyLevel::Linear,
                LevelArg::Weak => VerifyLevel::Weak,
                LevelArg::B => VerifyLevel::B,
            };
            cmd_verify(&file, level, b)
        }
        Command::Solve {
            file,
            mode,
            policy,
            seed,
            budget,
            emit_tree,
        } => cmd_solve(
            &file,
            &SolveOptions {
                mode: match mode {
                    ModeArg::Pure => SplitMode::PureSplit,
                    ModeArg::Unit => SplitMode::UnitPropagation,
                },
                policy: match policy {
                    PolicyArg::Fixed => BranchPolicy::FixedOrder,
                    PolicyArg::Degree => BranchPolicy::MaxDegreeFirst,
                    PolicyArg::Random => BranchPolicy::SeededRandom,
                },
                seed,
                decision_budget: budget,
                emit_tree,
            },
        ),
        Command::CheckTree { tree, formula } => cmd_check_tree(&tree, &formula),
        Command::Analyze {
            file,
            degrees,
            rich,
            weight,
            walk,
            kappa,
            bounds,
            k,
            b,
            len,
            trials,
            seed,
            tree,
            kappa_cap,
        } => cmd_analyze(&AnalyzeOptions {
            input: file,
            degrees,
            rich,
            weight,
            walk,
            kappa,
            bounds,
            k,
            b,
            walk_len: len,
            trials,
            seed,
            tree,
            kappa_cap,
        }),
    };
    match result {
        Ok(output) => {
            print!("{}", output.stdout);
            ExitCode::from(output.exit_code as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code as u8)
        }
    }
}
