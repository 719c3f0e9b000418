//! `dpasp`: solve, count and enumerate optimal answer sets of ground programs.
//!
//! Exit codes: 10 an answer set exists, 20 no answer set, 1 usage or input error,
//! 2 decomposition too wide, 3 cross-check or agreement failure, 0 otherwise.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dpasp::dp::SolveError;
use dpasp::graph::{build_semi_incidence, parse_graph, Graph};
use dpasp::minsat::{crosscheck, MinsatError};
use dpasp::oracle::{brute_force_answer_sets, optimal_answer_sets, optimal_cost, DEFAULT_ATOM_BUDGET};
use dpasp::parser::{emit_text, parse_program, Format};
use dpasp::program::{Interpretation, Program};
use dpasp::solve::{optimum_per_td, run, Engine, SolveOptions};
use dpasp::steiner::{grid_graph, sample_terminals, steiner_program};
use dpasp::td::{emit_td, heuristic_td, parse_td, select_td, Feature, Heuristic, TreeDecomposition};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_USAGE: u8 = 1;
const EXIT_WIDTH: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "dpasp", version, about = "Answer-set solving by dynamic programming on tree decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one optimal answer set and its cost.
    Solve(SolveArgs),
    /// Print the number of optimal answer sets.
    Count(SolveArgs),
    /// Print all optimal answer sets, one per line.
    Enumerate(SolveArgs),
    /// Write a decomposition of a graph or of a program's semi-incidence graph.
    Decompose(DecomposeArgs),
    /// Write a Steiner tree program for a graph and sampled terminals.
    BenchSteiner(SteinerArgs),
    /// Compare both engines, the brute-force oracle and the minimal-model reduction.
    Crosscheck(CrosscheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Single,
    Multipass,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureArg {
    Width,
    Depgraph,
    Joinsize,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    MinFill,
    MinDegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Smodels,
    Text,
}

#[derive(Args)]
struct TdArgs {
    /// Number of candidate decompositions.
    #[arg(long, default_value_t = 5)]
    tds: usize,
    #[arg(long, value_enum, default_value_t = FeatureArg::Width)]
    td_feature: FeatureArg,
    #[arg(long, value_enum, default_value_t = HeuristicArg::MinFill)]
    heuristic: HeuristicArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Program file in SModels or text format; `-` reads stdin.
    program: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Multipass)]
    engine: EngineArg,
    #[command(flatten)]
    td: TdArgs,
    /// Decomposition of the semi-incidence graph in `.td` format.
    #[arg(long)]
    td_in: Option<PathBuf>,
    /// Write the decomposition used.
    #[arg(long)]
    td_out: Option<PathBuf>,
    #[arg(long)]
    stats_json: Option<PathBuf>,
    /// Use the brute-force oracle instead of an engine.
    #[arg(long)]
    oracle: bool,
    /// Stop after this many answer sets.
    #[arg(long)]
    limit: Option<u64>,
    /// Solve once per candidate decomposition and fail unless all agree.
    #[arg(long)]
    all_tds_agree: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Graph (`.gr`) or program file; `-` reads stdin.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[command(flatten)]
    td: TdArgs,
    #[arg(long)]
    td_out: Option<PathBuf>,
}

#[derive(Args)]
struct SteinerArgs {
    /// Graph file in `.gr` format.
    #[arg(required_unless_present = "grid")]
    graph: Option<PathBuf>,
    /// Use an `ROWSxCOLS` grid instead of a graph file.
    #[arg(long, conflicts_with = "graph")]
    grid: Option<String>,
    #[arg(long)]
    terminals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CrosscheckArgs {
    program: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[command(flatten)]
    td: TdArgs,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Task {
    Solve,
    Count,
    Enumerate,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_program(path: &Path, format: FormatArg) -> Result<Program> {
    let format = match format {
        FormatArg::Auto => Format::Auto,
        FormatArg::Smodels => Format::Smodels,
        FormatArg::Text => Format::Text,
    };
    let src = read_input(path)?;
    parse_program(&src, format).with_context(|| format!("parsing {}", path.display()))
}

fn options(td: &TdArgs) -> SolveOptions {
    SolveOptions {
        tds: td.tds,
        feature: match td.td_feature {
            FeatureArg::Width => Feature::Width,
            FeatureArg::Depgraph => Feature::DepGraph,
            FeatureArg::Joinsize => Feature::JoinSize,
        },
        heuristic: match td.heuristic {
            HeuristicArg::MinFill => Heuristic::MinFill,
            HeuristicArg::MinDegree => Heuristic::MinDegree,
        },
        seed: td.seed,
        ..SolveOptions::default()
    }
}

/// Atom names sorted and joined by spaces.
fn render(p: &Program, m: &Interpretation) -> String {
    let mut names: Vec<String> = m.atoms().iter().map(|&a| p.display_name(a)).collect();
    names.sort();
    names.join(" ")
}

fn write_or_print(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn solve_with_oracle(p: &Program, task: Task, limit: Option<u64>, out: &mut impl Write) -> Result<u8> {
    let answers = brute_force_answer_sets(p, DEFAULT_ATOM_BUDGET)?;
    let Some(cost) = optimal_cost(&answers) else { return Ok(EXIT_UNSAT) };
    let opt = optimal_answer_sets(&answers);
    match task {
        Task::Solve => writeln!(out, "{}\ncost: {cost}", render(p, &opt[0]))?,
        Task::Count => writeln!(out, "{}", opt.len())?,
        Task::Enumerate => {
            for m in opt.iter().take(limit.map_or(usize::MAX, |l| l as usize)) {
                writeln!(out, "{}", render(p, m))?;
            }
        }
    }
    Ok(EXIT_SAT)
}

fn cmd_solve(args: &SolveArgs, task: Task) -> Result<u8> {
    let p = load_program(&args.program, args.format)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.oracle {
        return solve_with_oracle(&p, task, args.limit, &mut out);
    }
    let mut opts = options(&args.td);
    opts.engine = match args.engine {
        EngineArg::Single => Engine::Single,
        EngineArg::Multipass => Engine::Multipass,
    };
    opts.retain = task != Task::Count;
    if let Some(path) = &args.td_in {
        let (td, n) = parse_td(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let expected = build_semi_incidence(&p).graph.vertex_count();
        if n != expected {
            bail!("{} covers {n} vertices, the semi-incidence graph has {expected}", path.display());
        }
        opts.td = Some(td);
    }
    if args.all_tds_agree {
        let results = optimum_per_td(&p, &opts)?;
        if results.windows(2).any(|w| w[0].1 != w[1].1) {
            for (seed, r) in &results {
                eprintln!("seed {seed}: {r:?}");
            }
            return Ok(EXIT_MISMATCH);
        }
    }
    let r = run(&p, &opts)?;
    if let Some(path) = &args.td_out {
        let n = build_semi_incidence(&p).graph.vertex_count();
        fs::write(path, emit_td(&r.td, n)).with_context(|| format!("writing {}", path.display()))?;
    }
    match &args.stats_json {
        Some(path) => fs::write(path, serde_json::to_string_pretty(&r.stats)?)?,
        None => eprintln!(
            "width {} seed {} rows {} time {:.3}s",
            r.stats.width_used, r.stats.seed, r.stats.peak_rows, r.stats.total_seconds
        ),
    }
    let Some(best) = r.optimum() else { return Ok(EXIT_UNSAT) };
    match task {
        Task::Count => writeln!(out, "{}", best.count)?,
        Task::Solve => {
            let m = r.first()?.expect("optimum has an answer set");
            writeln!(out, "{}\ncost: {}", render(&p, &m), best.cost)?;
        }
        Task::Enumerate => {
            let mut left = args.limit.unwrap_or(u64::MAX);
            let mut failed = None;
            r.enumerate(|m| {
                if left == 0 {
                    return ControlFlow::Break(());
                }
                left -= 1;
                match writeln!(out, "{}", render(&p, &m)) {
                    Ok(()) => ControlFlow::Continue(()),
                    Err(e) => {
                        failed = Some(e);
                        ControlFlow::Break(())
                    }
                }
            })?;
            if let Some(e) = failed {
                return Err(e.into());
            }
        }
    }
    Ok(EXIT_SAT)
}

/// A `.gr` graph has `p tw` or `p edge` as its first non-comment line.
fn looks_like_graph(src: &str) -> bool {
    src.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with("c ") && *l != "c")
        .is_some_and(|l| l.starts_with("p tw") || l.starts_with("p edge"))
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<u8> {
    let src = read_input(&args.input)?;
    let opts = options(&args.td);
    let (td, n): (TreeDecomposition, usize) = if looks_like_graph(&src) {
        let g: Graph = parse_graph(&src).map_err(anyhow::Error::msg)?;
        let td = (0..opts.tds.max(1) as u64)
            .map(|i| heuristic_td(&g, opts.heuristic, opts.seed.wrapping_add(i)))
            .enumerate()
            .min_by_key(|(i, td)| (td.width(), *i))
            .unwrap()
            .1;
        (td, g.vertex_count())
    } else {
        let p = load_program(&args.input, args.format)?;
        let pg = build_semi_incidence(&p);
        let sel = select_td(&pg, &p, opts.tds, opts.feature, opts.heuristic, opts.seed);
        (sel.td, pg.graph.vertex_count())
    };
    eprintln!("width {}", td.width());
    write_or_print(args.td_out.as_deref(), &emit_td(&td, n))?;
    Ok(0)
}

fn parse_grid(spec: &str) -> Result<(usize, usize)> {
    let (r, c) = spec.split_once('x').context("grid must be ROWSxCOLS")?;
    Ok((r.trim().parse()?, c.trim().parse()?))
}

fn cmd_bench_steiner(args: &SteinerArgs) -> Result<u8> {
    let g = match (&args.grid, &args.graph) {
        (Some(spec), _) => {
            let (r, c) = parse_grid(spec)?;
            grid_graph(r, c)
        }
        (None, Some(path)) => parse_graph(&read_input(path)?).map_err(anyhow::Error::msg)?,
        (None, None) => bail!("a graph file or --grid is required"),
    };
    if !g.is_connected() {
        bail!("graph is not connected");
    }
    if args.terminals == 0 || args.terminals > g.vertex_count() {
        bail!("terminal count must be between 1 and {}", g.vertex_count());
    }
    let terminals = sample_terminals(&g, args.terminals, args.seed);
    print!("{}", emit_text(&steiner_program(&g, &terminals)));
    Ok(0)
}

fn cmd_crosscheck(args: &CrosscheckArgs) -> Result<u8> {
    let p = load_program(&args.program, args.format)?;
    let answers = brute_force_answer_sets(&p, DEFAULT_ATOM_BUDGET)?;
    let want = optimal_answer_sets(&answers);
    let want_cost = optimal_cost(&answers);
    let mut ok = true;
    for engine in [Engine::Single, Engine::Multipass] {
        let r = run(&p, &SolveOptions { engine, ..options(&args.td) })?;
        let mut got = Vec::new();
        r.enumerate(|m| {
            got.push(m);
            ControlFlow::Continue(())
        })?;
        got.sort();
        let agree = got == want && r.optimum().map(|b| b.cost) == want_cost;
        println!("engine {engine:?}: {}", if agree { "agrees" } else { "MISMATCH" });
        ok &= agree;
    }
    match crosscheck(&p) {
        Ok(report) => {
            println!(
                "reduction: {} ({} answer sets, {} minimal models)",
                if report.ok() { "agrees" } else { "MISMATCH" },
                report.answer_sets.len(),
                report.projected.len()
            );
            for m in &report.missing {
                println!("  missing {}", render(&p, m));
            }
            for m in &report.spurious {
                println!("  spurious {}", render(&p, m));
            }
            ok &= report.ok();
        }
        Err(MinsatError::NonDisjunctiveInput { .. }) => println!("reduction: skipped, program is not disjunctive"),
        Err(e) => return Err(e.into()),
    }
    Ok(if ok { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, Task::Solve),
        Command::Count(a) => cmd_solve(a, Task::Count),
        Command::Enumerate(a) => cmd_solve(a, Task::Enumerate),
        Command::Decompose(a) => cmd_decompose(a),
        Command::BenchSteiner(a) => cmd_bench_steiner(a),
        Command::Crosscheck(a) => cmd_crosscheck(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let wide = matches!(e.downcast_ref::<SolveError>(), Some(SolveError::WidthExceeded { .. }));
            ExitCode::from(if wide { EXIT_WIDTH } else { EXIT_USAGE })
        }
    }
}
