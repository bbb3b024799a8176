//! Command-line front end for `gridreg`.
//!
//! Every command reads and writes the library's JSON formats; the output is
//! rendered through `serde_json::Value`, whose maps keep keys sorted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gridreg::search::{SearchStatus, DEFAULT_BUDGET};
use gridreg::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gridreg", version, about = "Perfect and distance regular colorings of Z^n")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a coloring or matrix from one of the known families.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a coloring file for perfectness or distance regularity.
    Verify(VerifyArgs),
    /// Full structural report for a coloring file.
    Analyze { file: PathBuf },
    /// Candidate tridiagonal parameter matrices with their filter flags.
    EnumerateMatrices {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Backtracking search on one torus.
    Search(SearchArgs),
    /// Distance regular colorings up to translation and color reordering.
    Classify(ClassifyArgs),
    /// Print a 2-D coloring as a character grid.
    Render { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    Gray {
        #[arg(long)]
        n: usize,
    },
    OneDim {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kind: OneDimKind,
    },
    Lift {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kind: OneDimKind,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        delta: Vec<i8>,
    },
    Cylinder {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    ReducibleMatrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps1: usize,
        #[arg(long)]
        eps2: usize,
    },
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("property").required(true).args(["perfect", "distance_regular"])))]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub perfect: bool,
    #[arg(long)]
    pub distance_regular: bool,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, env = "GRIDREG_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub periods: Vec<usize>,
    /// Parameter matrix file; without it every candidate matrix is tried.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub limits: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub max_period: usize,
    #[command(flatten)]
    pub limits: BudgetArgs,
}

/// What a command produced: text for standard output and an exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

pub fn read_coloring(path: &Path) -> Result<PeriodicColoring, UsageError> {
    PeriodicColoring::from_json_str(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

pub fn with_construction(coloring: &PeriodicColoring, construction: Value) -> Value {
    let mut v = to_value(coloring);
    v["construction"] = construction;
    v
}

pub fn construct(c: &Construct) -> Result<Value, UsageError> {
    Ok(match c {
        Construct::Gray { n } => with_construction(&gray_lift(*n)?, json!({"kind": "gray", "n": n})),
        Construct::OneDim { k, kind } => {
            with_construction(&one_dim_pattern(*k, *kind)?, json!({"kind": kind.to_string(), "k": k}))
        }
        Construct::Lift { k, kind, delta } => {
            let lift = lift_reducible(&one_dim_pattern(*k, *kind)?, delta)?;
            with_construction(&lift, json!({"kind": "lift", "pattern": kind.to_string(), "k": k, "delta": delta}))
        }
        Construct::Cylinder { file, n } => {
            let source = read_coloring(file)?;
            let lifted = cylindrical_lift(&source, *n)?;
            with_construction(&lifted, json!({"kind": "cylinder", "source_n": source.n(), "n": n}))
        }
        Construct::ReducibleMatrix { n, k, r, eps1, eps2 } => {
            let m = reducible_matrix(ReducibleMatrixSpec { n: *n, k: *k, r: *r, eps1: *eps1, eps2: *eps2 })?;
            let mut v = to_value(&m);
            v["construction"] = json!({"kind": "reducible-matrix", "r": r, "eps1": eps1, "eps2": eps2});
            v
        }
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Output, UsageError> {
    let coloring = read_coloring(&args.file)?;
    let (value, holds) = if args.perfect {
        match compute_parameter_matrix(&coloring) {
            Ok(m) => (json!({"perfect": true, "matrix": to_value(&m)}), true),
            Err(w) => (json!({"perfect": false, "witness": to_value(&w)}), false),
        }
    } else {
        match check_distance_regular(&coloring) {
            Ok(r) => (json!({"distance_regular": true, "report": to_value(&r)}), true),
            Err(DistRegError::NotPerfect(w)) => (
                json!({"distance_regular": false, "error": DistRegError::NotPerfect(w.clone()).to_string(), "witness": to_value(&w)}),
                false,
            ),
            Err(e) => (json!({"distance_regular": false, "error": e.to_string()}), false),
        }
    };
    Ok(Output { text: render_json(&value), code: if holds { EXIT_OK } else { EXIT_PROPERTY_FAILS } })
}

fn status_code(status: SearchStatus) -> i32 {
    match status {
        SearchStatus::Complete => EXIT_OK,
        SearchStatus::BudgetExceeded => EXIT_BUDGET,
    }
}

pub fn search(args: &SearchArgs) -> Result<Output, UsageError> {
    let mut config = SearchConfig::new(args.n, args.k, args.periods.clone());
    if let Some(path) = &args.matrix {
        config.target = Some(ParameterMatrix::from_json_str(&read(path)?)?);
    }
    config.workers = args.limits.workers;
    config.budget = args.limits.budget;
    let out = search_colorings(&config)?;
    let value = json!({
        "colorings": to_value(&out.colorings),
        "summary": {"classes": out.colorings.len(), "nodes": out.nodes, "status": to_value(&out.status)},
    });
    Ok(Output { text: render_json(&value), code: status_code(out.status) })
}

pub fn classify_cmd(args: &ClassifyArgs) -> Result<Output, UsageError> {
    let c = classify(args.n, args.k, args.max_period, args.limits.workers, args.limits.budget)?;
    let value = json!({
        "classes": to_value(&c.classes),
        "summary": {
            "n": c.n,
            "k": c.k,
            "max_period": c.max_period,
            "classes": c.classes.len(),
            "classes_up_to_grid_symmetry": c.classes_up_to_grid_symmetry,
            "candidates": c.candidates,
            "nodes": c.nodes,
            "status": to_value(&c.status),
        },
    });
    Ok(Output { text: render_json(&value), code: status_code(c.status) })
}

const GLYPHS: &[u8] = b"123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Rows follow the first coordinate, columns the second.
pub fn render(coloring: &PeriodicColoring) -> Result<String, UsageError> {
    if coloring.n() != 2 {
        return Err(UsageError(format!("render needs n = 2, got n = {}", coloring.n())));
    }
    if coloring.k() > GLYPHS.len() {
        return Err(UsageError(format!("render supports at most {} colors", GLYPHS.len())));
    }
    let cols = coloring.periods()[1];
    let mut out = String::new();
    for row in coloring.colors().chunks(cols) {
        out.extend(row.iter().map(|&c| GLYPHS[c - 1] as char));
        out.push('\n');
    }
    Ok(out)
}

pub fn execute(cli: &Cli) -> Result<Output, UsageError> {
    let json_ok = |v: Value| Output { text: render_json(&v), code: EXIT_OK };
    match &cli.command {
        Command::Construct(c) => construct(c).map(json_ok),
        Command::Verify(args) => verify(args),
        Command::Analyze { file } => Ok(json_ok(to_value(&analyze(&read_coloring(file)?)))),
        Command::EnumerateMatrices { n, k } => {
            if *n == 0 || *k == 0 {
                return Err(UsageError("n and k must be positive".into()));
            }
            Ok(json_ok(to_value(&enumerate_matrices(*n, *k))))
        }
        Command::Search(args) => search(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Render { file } => Ok(Output { text: render(&read_coloring(file)?)?, code: EXIT_OK }),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(out.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    out.code
}
