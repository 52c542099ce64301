mod cmd;
mod ctx;
mod report;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bstorder::{GraphKind, MatrixClass, ObstructionKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cmd::misc::FormulaSource;
use ctx::Ctx;
use report::{error_report, CliError, CliResult, Digest256, Outcome, Report, SCHEMA};

#[derive(Parser)]
#[command(name = "bstorder", version, about = "BST orders, chain extraction and twin-width tools")]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refuse inputs with more vertices (or a longer permutation) than this.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Write the command's file-format output (tree, sequence, digraph, ...) here.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Text,
}

fn graph_kind(s: &str) -> Result<GraphKind, String> {
    s.parse().map_err(|e: bstorder::Error| e.to_string())
}

fn obstruction_kind(s: &str) -> Result<ObstructionKind, String> {
    s.parse().map_err(|e: bstorder::Error| e.to_string())
}

fn matrix_class(s: &str) -> Result<MatrixClass, String> {
    s.parse().map_err(|e: bstorder::Error| e.to_string())
}

#[derive(Args)]
struct GraphArgs {
    /// Digraph file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = graph_kind, default_value = "tournament")]
    kind: GraphKind,
}

#[derive(Subcommand)]
enum Command {
    /// Twin-width: approximation, exact search and sequence checking.
    #[command(subcommand)]
    Tww(TwwCmd),
    /// Non-overlapping interval extraction along a BST branch.
    Extract {
        #[command(flatten)]
        graph: GraphArgs,
        /// Tree file, `build` or `build:<strategy>`.
        #[arg(long)]
        bst: Option<String>,
        /// Family file, `singletons` or `chunks:<size>`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        enforce_budget: bool,
    },
    /// Rank division followed by extraction on both sides.
    GridPipeline {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        bst: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        enforce_budget: bool,
    },
    #[command(subcommand)]
    Bst(BstCmd),
    /// Permutation-encoding tournaments.
    #[command(subcommand)]
    Obstruct(ObstructCmd),
    #[command(subcommand)]
    Matrix(MatrixCmd),
    #[command(subcommand)]
    Perm(PermCmd),
    /// First-order model checking.
    #[command(subcommand)]
    Fo(FoCmd),
}

#[derive(Subcommand)]
enum TwwCmd {
    /// Contraction sequence or rank-division witness.
    Approx {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Build strategy: `random[:seed]`, `median` or `insertion[:list]`.
        #[arg(long)]
        bst: Option<String>,
    },
    /// Exact twin-width by exhaustive search (small inputs only).
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Width of a given contraction sequence.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        sequence: PathBuf,
        /// Also check the sequence against this BST's order.
        #[arg(long)]
        bst: Option<String>,
    },
}

#[derive(Subcommand)]
enum BstCmd {
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        strategy: Option<String>,
    },
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        tree: PathBuf,
    },
}

#[derive(Subcommand)]
enum ObstructCmd {
    Gen {
        #[arg(long, value_parser = obstruction_kind)]
        kind: ObstructionKind,
        #[arg(long)]
        perm: PathBuf,
        /// Extend the permutation so the result decodes back to it.
        #[arg(long)]
        extend: bool,
    },
    Decode {
        #[arg(long, value_parser = obstruction_kind)]
        kind: ObstructionKind,
        #[arg(long)]
        input: PathBuf,
    },
    Enumerate {
        #[arg(long, value_parser = obstruction_kind)]
        kind: Option<ObstructionKind>,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Is the given division a k-grid?
    Grid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// First row and column (1-based) of every part after the first, e.g. `3,5/2,4`.
        #[arg(long)]
        cuts: String,
    },
    Rankdiv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Matrix encoding of a permutation.
    Class {
        #[arg(long, value_parser = matrix_class)]
        class: MatrixClass,
        #[arg(long)]
        perm: PathBuf,
        #[arg(long)]
        reverse_rows: bool,
        #[arg(long)]
        reverse_cols: bool,
        #[arg(long)]
        normalize: bool,
    },
}

#[derive(Subcommand)]
enum PermCmd {
    Pattern {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Largest grid, or a k-grid when `--k` is given.
    Grid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormulaArgs {
    /// Sentence file (s-expression).
    #[arg(long)]
    formula: Option<PathBuf>,
    /// Dominating set of size at most K.
    #[arg(long, value_name = "K")]
    ds: Option<usize>,
    /// Feedback vertex set of size at most K.
    #[arg(long, value_name = "K")]
    fvs: Option<usize>,
}

#[derive(Subcommand)]
enum FoCmd {
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Open domination for `--ds`.
        #[arg(long)]
        open: bool,
        /// Order used for the `ord` relation; identity if absent.
        #[arg(long)]
        bst: Option<String>,
    },
    /// Print a built-in formula.
    Print {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        open: bool,
    },
}

impl FormulaArgs {
    fn source(&self, open: bool) -> FormulaSource<'_> {
        match (&self.formula, self.ds, self.fvs) {
            (Some(p), _, _) => FormulaSource::File(p),
            (_, Some(k), _) => FormulaSource::Ds(k, open),
            (_, _, Some(k)) => FormulaSource::Fvs(k),
            _ => unreachable!("clap requires one formula source"),
        }
    }
}

fn dispatch(ctx: &mut Ctx, command: &Command) -> CliResult<Outcome> {
    use cmd::{extract, misc, obstruct, pipeline, tww};
    match command {
        Command::Tww(TwwCmd::Approx { graph, k, bst }) => {
            tww::approx(ctx, &graph.input, graph.kind, *k, bst.as_deref())
        }
        Command::Tww(TwwCmd::Exact { graph }) => tww::exact(ctx, &graph.input, graph.kind),
        Command::Tww(TwwCmd::Check { graph, sequence, bst }) => {
            tww::check(ctx, &graph.input, graph.kind, sequence, bst.as_deref())
        }
        Command::Extract {
            graph,
            bst,
            family,
            k,
            enforce_budget,
        } => extract::run(ctx, &graph.input, graph.kind, bst.as_deref(), family, *k, *enforce_budget),
        Command::GridPipeline {
            graph,
            bst,
            k,
            enforce_budget,
        } => pipeline::run(ctx, &graph.input, graph.kind, bst.as_deref(), *k, *enforce_budget),
        Command::Bst(BstCmd::Build { graph, strategy }) => {
            misc::bst_build(ctx, &graph.input, graph.kind, strategy.as_deref())
        }
        Command::Bst(BstCmd::Check { graph, tree }) => misc::bst_check(ctx, &graph.input, graph.kind, tree),
        Command::Obstruct(ObstructCmd::Gen { kind, perm, extend }) => obstruct::gen(ctx, *kind, perm, *extend),
        Command::Obstruct(ObstructCmd::Decode { kind, input }) => obstruct::decode(ctx, *kind, input),
        Command::Obstruct(ObstructCmd::Enumerate { kind, m_max }) => obstruct::enumerate(ctx, *kind, *m_max),
        Command::Matrix(MatrixCmd::Grid { input, k, cuts }) => misc::matrix_grid(ctx, input, *k, cuts),
        Command::Matrix(MatrixCmd::Rankdiv { input, k }) => misc::matrix_rankdiv(ctx, input, *k),
        Command::Matrix(MatrixCmd::Class {
            class,
            perm,
            reverse_rows,
            reverse_cols,
            normalize,
        }) => misc::matrix_class(ctx, *class, perm, *reverse_rows, *reverse_cols, *normalize),
        Command::Perm(PermCmd::Pattern { input, pattern }) => misc::perm_pattern(ctx, input, pattern),
        Command::Perm(PermCmd::Grid { input, k }) => misc::perm_grid(ctx, input, *k),
        Command::Fo(FoCmd::Check {
            graph,
            formula,
            open,
            bst,
        }) => misc::fo_check(ctx, &graph.input, graph.kind, &formula.source(*open), bst.as_deref()),
        Command::Fo(FoCmd::Print { formula, open }) => misc::fo_print(&formula.source(*open)),
    }
}

fn run(cli: &Cli, argv: &[String], ctx: &mut Ctx) -> CliResult<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let start = Instant::now();
    let out = dispatch(ctx, &cli.command)?;
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut written = None;
    if let Some(path) = &cli.output {
        let Some(text) = &out.artifact else {
            return Err(CliError::Usage("this command has no file output for --output".into()));
        };
        fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        written = Some(Digest256::of(path, text.as_bytes()));
    }

    match cli.emit {
        Emit::Json => {
            let report = Report {
                schema: SCHEMA,
                command: argv,
                inputs: &ctx.inputs,
                seed: ctx.seed,
                mode: &out.mode,
                result: &out.result,
                verification: json!({"passed": true, "checks": out.checks}),
                output: written,
                timing_ms,
            };
            // through Value so that every object has sorted keys
            let value = serde_json::to_value(&report).expect("report serializes");
            emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("report serializes")));
        }
        Emit::Text => emit(&out.text),
    }
    Ok(())
}

/// A closed pipe (`| head`) is not an error worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut ctx = Ctx::new(cli.seed, cli.max_n);
    match run(&cli, &argv, &mut ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            if cli.emit == Emit::Json {
                let value = error_report(&argv, &ctx.inputs, &err);
                emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("report serializes")));
            }
            ExitCode::from(err.code())
        }
    }
}
