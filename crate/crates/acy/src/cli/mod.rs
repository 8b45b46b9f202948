//! Command-line front end: graph listing, full computations and selected
//! verifications, with fixed exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{build_algebra, AlgebraError, GradedAlgebra};
use crate::cells::{
    builtin_potential, fix_nu_gauge, solve_cells, to_potential, CellDoc, CellError, CellSource, RelationDoc,
    SolveOptions, CELL_SCHEMA, RELATION_SCHEMA,
};
use crate::homology::{
    compute_report, describe_tower, CellSummary, Check, ComputeOptions, HomologyError, HomologyReport, ReportContext,
};
use crate::quiver::{Family, Graph, GraphDoc, GraphError, UNSUPPORTED};
use crate::scalar::ScalarError;
use crate::series::SeriesError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "acy", version, about = "Almost Calabi-Yau algebras of SU(3) ADE graphs and their homology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List built-in graphs with h, |V|, |E| and the type of nu.
    GraphsList {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the algebra and compute HH, HC and HH^* with every check.
    Compute(RunArgs),
    /// Run only the checks named by --check (all when none is given).
    Verify(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Built-in name (A4, A7*, D9, D6*, E8, E8*) or a graph JSON file.
    #[arg(long)]
    pub graph: String,
    /// `builtin`, `solve`, or a cell / relation JSON file.
    #[arg(long, default_value = "builtin")]
    pub cells: String,
    /// Highest total degree in the tables (default 4h, at least 3h).
    #[arg(long)]
    pub cutoff_degree: Option<i64>,
    /// Number of 12-periods of the complex.
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal digits to which solver weights must match exact candidates.
    #[arg(long, default_value_t = 9)]
    pub precision: u32,
    /// Seed for the solver's random starts
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Checks to run, comma-separated: hilbert, d2, exactness, duality,
    /// periodicity, euler, hh0_cross, hh0_printed, cohomology, structure, theorem
    #[arg(long = "check", value_delimiter = ',')]
    pub checks: Vec<Check>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("input: {0}")]
    Input(String),
    #[error("check failed: {0}")]
    Math(String),
    #[error("solver: {0}")]
    Solver(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => EXIT_INPUT,
            RunError::Math(_) => EXIT_MATH,
            RunError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl From<GraphError> for RunError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Scalar(s) => s.into(),
            e => RunError::Input(e.to_string()),
        }
    }
}

impl From<ScalarError> for RunError {
    fn from(e: ScalarError) -> Self {
        RunError::Solver(e.to_string())
    }
}

impl From<SeriesError> for RunError {
    fn from(e: SeriesError) -> Self {
        RunError::Math(e.to_string())
    }
}

impl From<CellError> for RunError {
    fn from(e: CellError) -> Self {
        match e {
            CellError::Graph(g) => g.into(),
            CellError::Scalar(s) => s.into(),
            CellError::Solver(_) | CellError::Exactify(_) => RunError::Solver(e.to_string()),
            CellError::Verification(_) | CellError::NotUnitary(_) | CellError::NotCyclic(_) => RunError::Math(e.to_string()),
            CellError::UserDataRequired(_) | CellError::Schema(_) => RunError::Input(e.to_string()),
        }
    }
}

impl From<AlgebraError> for RunError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Scalar(s) => s.into(),
            AlgebraError::Cells(c) => c.into(),
            AlgebraError::Series(s) => s.into(),
            e => RunError::Math(e.to_string()),
        }
    }
}

impl From<HomologyError> for RunError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Scalar(s) => s.into(),
            HomologyError::Algebra(a) => a.into(),
            HomologyError::Series(s) => s.into(),
            HomologyError::Cutoff { .. } => RunError::Input(e.to_string()),
            e => RunError::Math(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

/// A graph from a built-in name or a graph document.
pub fn load_graph(spec: &str) -> Result<(Arc<Graph>, Option<Family>), RunError> {
    let path = Path::new(spec);
    if path.is_file() {
        let doc: GraphDoc = serde_json::from_str(&read(path)?).map_err(|e| RunError::Input(format!("{spec}: {e}")))?;
        return Ok((Arc::new(doc.to_graph()?), None));
    }
    let f = Family::parse(spec)?;
    Ok((Arc::new(f.build()?), Some(f)))
}

/// Cells from a document: certified cells, or relations taken as given.
fn cells_from_file(path: &Path, g: &Arc<Graph>) -> Result<(crate::cells::Potential, bool), RunError> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or_default();
    let bad = |e: serde_json::Error| RunError::Input(format!("{}: {e}", path.display()));
    match schema {
        CELL_SCHEMA => {
            let doc: CellDoc = serde_json::from_value(value).map_err(bad)?;
            let cells = doc.to_cells(g)?;
            cells.certify()?;
            let cells = fix_nu_gauge(&cells)?;
            Ok((to_potential(&cells.potential())?, true))
        }
        RELATION_SCHEMA => {
            let doc: RelationDoc = serde_json::from_value(value).map_err(bad)?;
            Ok((to_potential(&doc.to_relations(g)?.to_potential()?)?, false))
        }
        other => Err(RunError::Input(format!("{}: unknown schema `{other}`", path.display()))),
    }
}

/// Graph, cells and algebra for one run.
pub fn prepare(graph: &str, cells: &str, solve: &SolveOptions) -> Result<(GradedAlgebra, ReportContext), RunError> {
    let (g, family) = load_graph(graph)?;
    let (potential, certified, origin) = match (cells, family) {
        ("builtin" | "solve", Some(f)) => {
            let source = if cells == "solve" { CellSource::Solve } else { CellSource::Builtin };
            let p = builtin_potential(f, source, solve)?;
            (p.potential, p.cells.is_some(), p.origin)
        }
        ("solve", None) => {
            let c = fix_nu_gauge(&solve_cells(&g, solve)?)?;
            (to_potential(&c.potential())?, true, format!("{}: solved cells", g.name))
        }
        ("builtin", None) => return Err(RunError::Input(format!("no built-in cells for custom graph `{}`", g.name))),
        (file, _) => {
            let (p, certified) = cells_from_file(Path::new(file), &g)?;
            (p, certified, format!("{}: {file}", g.name))
        }
    };
    let a = build_algebra(&potential.relations())?;
    let summary = CellSummary { origin, tower: describe_tower(a.tower()), certified };
    Ok((a, ReportContext { family, cells: summary }))
}

fn solve_options(args: &RunArgs) -> Result<SolveOptions, RunError> {
    if !(3..=15).contains(&args.precision) {
        return Err(RunError::Input(format!("--precision {} outside 3..=15", args.precision)));
    }
    Ok(SolveOptions { seed: args.seed, match_tol: 10f64.powi(-(args.precision as i32)), ..Default::default() })
}

/// Full report for the run described by `args`; `verify` restricts to the
/// named checks and leaves the tables out.
pub fn run_report(args: &RunArgs, verify: bool) -> Result<HomologyReport, RunError> {
    if args.periods == 0 {
        return Err(RunError::Input("--periods must be at least 1".into()));
    }
    let (a, ctx) = prepare(&args.graph, &args.cells, &solve_options(args)?)?;
    let mut opts = ComputeOptions { cutoff_degree: args.cutoff_degree, periods: args.periods, ..Default::default() };
    if !args.checks.is_empty() {
        opts.checks = args.checks.iter().copied().collect();
    }
    if verify {
        opts.tables = false;
    }
    Ok(compute_report(&a, &ctx, &opts)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphListing {
    pub name: String,
    pub family: String,
    pub parameters: String,
    pub h: Option<u32>,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub nu: String,
    pub supported: bool,
}

const LISTED: &[&str] = &[
    "A4", "A5", "A6", "A7", "A8", "A9", "A5*", "A6*", "A7*", "A8*", "A9*", "D6", "D9", "D12", "D5*", "D6*", "D7*", "D8*",
    "D9*", "E8", "E8*",
];

pub fn graphs_list() -> Result<Vec<GraphListing>, RunError> {
    let mut out = Vec::new();
    for name in LISTED {
        let f = Family::parse(name)?;
        let g = f.build()?;
        let (family, parameters) = match f {
            Family::A(_) => ("A", "n >= 4"),
            Family::AStar(_) => ("A*", "n >= 5"),
            Family::D(_) => ("D", "n = 3k+3 >= 6"),
            Family::DStar(_) => ("D*", "n >= 5"),
            Family::E8 => ("E8", "none"),
            Family::E8Star => ("E8*", "none"),
        };
        out.push(GraphListing {
            name: name.to_string(),
            family: family.into(),
            parameters: parameters.into(),
            h: Some(g.h),
            vertices: Some(g.num_vertices()),
            edges: Some(g.num_edges()),
            nu: if g.nu_is_trivial() { "identity" } else { "rotation" }.into(),
            supported: true,
        });
    }
    for name in UNSUPPORTED {
        out.push(GraphListing {
            name: name.to_string(),
            family: name.trim_end_matches('*').split('(').next().unwrap_or(name).into(),
            parameters: "none".into(),
            h: None,
            vertices: None,
            edges: None,
            nu: "-".into(),
            supported: false,
        });
    }
    Ok(out)
}

fn render_listing(rows: &[GraphListing]) -> String {
    let mut s = format!("{:<8} {:<7} {:<15} {:>3} {:>4} {:>4}  {}\n", "graph", "family", "parameters", "h", "|V|", "|E|", "P");
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    for r in rows {
        let p = if r.supported { r.nu.clone() } else { "unsupported".into() };
        let _ = writeln!(
            s,
            "{:<8} {:<7} {:<15} {:>3} {:>4} {:>4}  {}",
            r.name,
            r.family,
            r.parameters,
            opt(r.h.map(|h| h as usize)),
            opt(r.vertices),
            opt(r.edges),
            p
        );
    }
    s
}

/// What a command produced: text for stdout (or the --out file) and the
/// report, when there is one.
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub report: Option<HomologyReport>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match &self.report {
            Some(r) if !r.passed() => EXIT_MATH,
            _ => EXIT_OK,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, RunError> {
    match &cli.command {
        Command::GraphsList { format } => {
            let rows = graphs_list()?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&rows).expect("listing serializes") + "\n",
                Format::Text => render_listing(&rows),
            };
            Ok(Outcome { text, out: None, report: None })
        }
        Command::Compute(args) | Command::Verify(args) => {
            let verify = matches!(cli.command, Command::Verify(_));
            let report = run_report(args, verify)?;
            let text = match args.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            Ok(Outcome { text, out: args.out.clone(), report: Some(report) })
        }
    }
}

/// Size the worker pool from ACY_THREADS, when set.
pub fn configure_threads() -> Result<(), RunError> {
    let Ok(v) = std::env::var("ACY_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| RunError::Input(format!("ACY_THREADS=`{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| RunError::Input(format!("ACY_THREADS: {e}")))
}

/// Parse, run and write; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = configure_threads().and_then(|_| execute(&cli));
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("acy: {e}");
            return e.exit_code();
        }
    };
    match &outcome.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &outcome.text) {
                eprintln!("acy: input: {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{}", outcome.text),
    }
    if let Some(r) = &outcome.report {
        if !r.passed() {
            let names: Vec<&str> = r.failures().iter().map(|c| c.name()).collect();
            eprintln!("acy: check failed: {}", names.join(", "));
        }
    }
    outcome.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_marks_unsupported_and_identity() {
        let rows = graphs_list().unwrap();
        let a4 = rows.iter().find(|r| r.name == "A4").unwrap();
        assert_eq!((a4.h, a4.vertices), (Some(4), Some(3)));
        assert!(rows.iter().any(|r| r.name == "E4(12)" && !r.supported));
        assert_eq!(rows.iter().find(|r| r.name == "D9").unwrap().nu, "identity");
        assert!(render_listing(&rows).contains("unsupported"));
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(RunError::from(GraphError::UnknownName("Q3".into())).exit_code(), EXIT_INPUT);
        assert_eq!(RunError::from(CellError::Verification("x".into())).exit_code(), EXIT_MATH);
        assert_eq!(RunError::from(CellError::Solver("x".into())).exit_code(), EXIT_SOLVER);
        assert_eq!(RunError::from(HomologyError::Cutoff { cutoff: 1, min: 12 }).exit_code(), EXIT_INPUT);
    }

    #[test]
    fn parses_the_documented_flags() {
        let cli = Cli::try_parse_from([
            "acy", "verify", "--graph", "A5", "--check", "duality,euler", "--cutoff-degree", "20", "--format", "json",
        ])
        .unwrap();
        let Command::Verify(args) = cli.command else { panic!("expected verify") };
        assert_eq!(args.checks, vec![Check::Duality, Check::Euler]);
        assert_eq!(args.cutoff_degree, Some(20));
        assert_eq!(args.format, Format::Json);
    }
}
