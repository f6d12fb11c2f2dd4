//! Batch front end over the core library. Every run writes a canonical JSON
//! artifact; identical inputs, flags, and seeds reproduce identical bytes, so
//! runs can be diffed and archived. Timing goes to stderr only, keeping the
//! artifacts stable.
//!
//! Exit codes: 0 success and every requested predicate true, 1 some requested
//! predicate false, 2 usage or input errors, 3 a search budget or cap was
//! exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use revex_core::condorder::{cond_census, cond_census_sampled, to_dot, verify_antichain, verify_convexity};
use revex_core::error::Error as CoreError;
use revex_core::extremal::{
    census, is_maximal, is_minimal, saturate, CensusWhat, ClassSpec, Guarantee, SearchMode,
    TieBreak,
};
use revex_core::formula::{classify, evaluate, parse, transform_c, transform_neg, Valuation};
use revex_core::gallery;
use revex_core::morphism::{
    is_reversible, is_strongly_reversible, is_weakly_reversible, DEFAULT_ORBIT_CAP,
};
use revex_core::structure::{Signature, Structure};
use revex_core::Direction;

type CmdResult = Result<u8, CoreError>;

#[derive(Parser)]
#[command(
    name = "revex",
    version,
    about = "Finite relational structures: membership, extremality, censuses"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership, extremality, and reversibility of a structure
    Check(CheckArgs),
    /// Grow or shrink a member greedily until locally extreme
    Saturate(SaturateArgs),
    /// Enumerate the members of a class on a fixed domain
    Census(CensusArgs),
    /// Emit a constructed structure
    Gallery {
        #[command(subcommand)]
        what: GalleryCmd,
    },
    /// Census and quotient of the condensation order on a fixed domain
    Condorder(CondorderArgs),
    /// Parse, classify, transform, and evaluate formulas
    Formula {
        #[command(subcommand)]
        what: FormulaCmd,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Check(_) => "check",
            Cmd::Saturate(_) => "saturate",
            Cmd::Census(_) => "census",
            Cmd::Gallery { .. } => "gallery",
            Cmd::Condorder(_) => "condorder",
            Cmd::Formula { .. } => "formula",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Local,
    Exact,
}

impl From<ModeArg> for SearchMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Local => SearchMode::Local,
            ModeArg::Exact => SearchMode::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    /// Add tuples toward a maximal member
    Up,
    /// Remove tuples toward a minimal member
    Down,
}

impl From<DirArg> for Direction {
    fn from(dir: DirArg) -> Self {
        match dir {
            DirArg::Up => Direction::Max,
            DirArg::Down => Direction::Min,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Structure JSON file
    #[arg(long = "in")]
    input: PathBuf,
    /// Class specification JSON file
    #[arg(long)]
    class: PathBuf,
    /// Also decide maximality
    #[arg(long, conflicts_with = "min")]
    max: bool,
    /// Also decide minimality
    #[arg(long)]
    min: bool,
    /// Extremality search mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Candidate budget for exact search
    #[arg(long)]
    budget: Option<u64>,
    /// Report destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SaturateArgs {
    /// Structure JSON file; must be a member of the class
    #[arg(long = "in")]
    input: PathBuf,
    /// Class specification JSON file
    #[arg(long)]
    class: PathBuf,
    /// Direction of the greedy walk
    #[arg(long, value_enum)]
    dir: DirArg,
    /// Random tie-break seed; least-step order when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Structure destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    /// Class specification JSON file
    #[arg(long)]
    class: PathBuf,
    /// Domain size
    #[arg(long)]
    n: usize,
    /// Keep only certified maximal members
    #[arg(long, conflicts_with = "min")]
    max: bool,
    /// Keep only certified minimal members
    #[arg(long)]
    min: bool,
    /// Collapse the result to canonical representatives
    #[arg(long)]
    up_to_iso: bool,
    /// Worker threads; never affects the output bytes
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on the candidate lattice size
    #[arg(long)]
    budget: Option<u64>,
    /// Report destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GalleryCmd {
    /// Cycle on k vertices, k at least 3
    Cycle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path on k vertices
    Path {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete graph on k vertices
    Complete {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edgeless graph on k vertices
    Empty {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete multipartite graph with the given part sizes
    Multipartite {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tournament on k vertices; forward orientation unless seeded
    Tournament {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace vertex i of a graph by an independent cloud of sizes[i] vertices
    Blowup {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CondorderArgs {
    /// Domain size
    #[arg(long)]
    n: usize,
    /// Signature as comma-separated arities
    #[arg(long, value_delimiter = ',', default_value = "2")]
    arities: Vec<usize>,
    /// Sample this many random interpretations instead of enumerating all
    #[arg(long, conflicts_with = "verify")]
    sample: Option<usize>,
    /// Seed for sampled censuses
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check convexity and antichain properties of the complete census
    #[arg(long)]
    verify: bool,
    /// Write the quotient order as a DOT digraph to this path
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Report destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    /// Complement transform: relation atoms are flipped, equality is kept
    C,
    /// Negation transform: full dual, quantifiers and connectives included
    Neg,
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Syntactic class flags of a formula
    Classify {
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a dual transform to a formula
    Transform {
        #[arg(value_enum)]
        op: OpArg,
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a sentence in a structure
    Eval {
        /// Structure JSON file
        #[arg(long = "in")]
        input: PathBuf,
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Canonical run artifact. Worker counts and wall-clock timing are
/// deliberately absent: they must not change the bytes.
#[derive(Serialize)]
struct RunReport {
    version: &'static str,
    command: &'static str,
    inputs: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    results: Value,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_raw(path: &Path) -> Result<(String, String), CoreError> {
    let text = fs::read_to_string(path)?;
    let hash = sha256_hex(text.as_bytes());
    Ok((text, hash))
}

fn read_structure(path: &Path) -> Result<(Structure, String), CoreError> {
    let (text, hash) = read_raw(path)?;
    Ok((Structure::from_json_str(&text)?, hash))
}

fn read_class(path: &Path) -> Result<(ClassSpec, String), CoreError> {
    let (text, hash) = read_raw(path)?;
    Ok((ClassSpec::from_json_str(&text)?, hash))
}

fn write_out(text: &str, out: Option<&Path>) -> Result<(), CoreError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report(report: &RunReport, out: Option<&Path>) -> Result<(), CoreError> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_out(&text, out)
}

/// Explicit flag, then the EXTREMAL_BUDGET environment variable, then the
/// library default.
fn effective_budget(flag: Option<u64>) -> Result<Option<u64>, CoreError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("EXTREMAL_BUDGET") {
        Err(_) => Ok(None),
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| {
                CoreError::Precondition(format!(
                    "EXTREMAL_BUDGET must be an unsigned integer, got '{text}'"
                ))
            }),
    }
}

fn structure_value(s: &Structure) -> Result<Value, CoreError> {
    Ok(serde_json::to_value(s)?)
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let (s, in_hash) = read_structure(&args.input)?;
    let (spec, class_hash) = read_class(&args.class)?;
    let budget = effective_budget(args.budget)?;

    let member = spec.member(&s)?;
    let mut results = serde_json::Map::new();
    results.insert("member".into(), json!(member));
    let mut all_true = member;
    let mut budget_hit = false;
    if member {
        results.insert(
            "reversibility".into(),
            json!({
                "reversible": is_reversible(&s, DEFAULT_ORBIT_CAP)?,
                "strongly_reversible": is_strongly_reversible(&s, DEFAULT_ORBIT_CAP)?,
                "weakly_reversible": is_weakly_reversible(&s, DEFAULT_ORBIT_CAP)?,
            }),
        );
        if args.max || args.min {
            let report = if args.max {
                is_maximal(&s, &spec, args.mode.into(), budget)?
            } else {
                is_minimal(&s, &spec, args.mode.into(), budget)?
            };
            match report.guarantee {
                Guarantee::WitnessFound => all_true = false,
                Guarantee::BudgetExhausted => budget_hit = true,
                _ => {}
            }
            results.insert("extremal".into(), serde_json::to_value(&report)?);
        }
    }

    emit_report(
        &RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command: "check",
            inputs: BTreeMap::from([("in", in_hash), ("class", class_hash)]),
            seed: None,
            results: Value::Object(results),
        },
        args.out.as_deref(),
    )?;
    Ok(if budget_hit {
        3
    } else if all_true {
        0
    } else {
        1
    })
}

fn cmd_saturate(args: &SaturateArgs) -> CmdResult {
    let (s, _) = read_structure(&args.input)?;
    let (spec, _) = read_class(&args.class)?;
    let tie = match args.seed {
        None => TieBreak::Lex,
        Some(seed) => TieBreak::Seeded(seed),
    };
    let grown = saturate(&s, &spec, args.dir.into(), tie)?;
    write_out(&grown.to_json_string(), args.out.as_deref())?;
    Ok(0)
}

fn cmd_census(args: &CensusArgs) -> CmdResult {
    let (spec, class_hash) = read_class(&args.class)?;
    let budget = effective_budget(args.budget)?;
    let what = if args.max {
        CensusWhat::Max
    } else if args.min {
        CensusWhat::Min
    } else {
        CensusWhat::All
    };
    let members = census(&spec, args.n, what, args.up_to_iso, args.workers, budget)?;
    let structures: Vec<Value> = members
        .iter()
        .map(structure_value)
        .collect::<Result<_, _>>()?;

    emit_report(
        &RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command: "census",
            inputs: BTreeMap::from([("class", class_hash)]),
            seed: None,
            results: json!({
                "domain": args.n,
                "what": match what {
                    CensusWhat::All => "all",
                    CensusWhat::Max => "max",
                    CensusWhat::Min => "min",
                },
                "up_to_iso": args.up_to_iso,
                "count": structures.len(),
                "structures": structures,
            }),
        },
        args.out.as_deref(),
    )?;
    Ok(0)
}

fn require(cond: bool, msg: &str) -> Result<(), CoreError> {
    if cond {
        Ok(())
    } else {
        Err(CoreError::Precondition(msg.into()))
    }
}

fn cmd_gallery(what: &GalleryCmd) -> CmdResult {
    let (structure, out) = match what {
        GalleryCmd::Cycle { k, out } => {
            require(*k >= 3, "a cycle needs at least 3 vertices")?;
            (gallery::cycle(*k), out)
        }
        GalleryCmd::Path { k, out } => {
            require(*k >= 1, "a path needs at least 1 vertex")?;
            (gallery::path(*k), out)
        }
        GalleryCmd::Complete { k, out } => {
            require(*k >= 1, "a complete graph needs at least 1 vertex")?;
            (gallery::complete(*k), out)
        }
        GalleryCmd::Empty { k, out } => {
            require(*k >= 1, "a graph needs at least 1 vertex")?;
            (gallery::empty_graph(*k), out)
        }
        GalleryCmd::Multipartite { sizes, out } => {
            require(!sizes.is_empty(), "need at least one part size")?;
            require(sizes.iter().all(|&s| s >= 1), "part sizes must be positive")?;
            (gallery::complete_multipartite(sizes), out)
        }
        GalleryCmd::Tournament { k, seed, out } => {
            require(*k >= 1, "a tournament needs at least 1 vertex")?;
            (gallery::tournament(*k, *seed), out)
        }
        GalleryCmd::Blowup { input, sizes, out } => {
            let (g, _) = read_structure(input)?;
            (gallery::blowup(&g, sizes)?, out)
        }
    };
    write_out(&structure.to_json_string(), out.as_deref())?;
    Ok(0)
}

fn cmd_condorder(args: &CondorderArgs) -> CmdResult {
    let signature = Signature::new(args.arities.clone())?;
    let result = match args.sample {
        None => cond_census(args.n, &signature)?,
        Some(samples) => cond_census_sampled(args.n, &signature, samples, args.seed)?,
    };

    let mut results = serde_json::Map::new();
    results.insert("domain".into(), json!(result.domain));
    results.insert("arities".into(), json!(signature.arities()));
    results.insert("complete".into(), json!(result.complete));
    results.insert(
        "interpretations".into(),
        json!(result.orbit_sizes.iter().sum::<usize>()),
    );
    results.insert("orbits".into(), json!(result.reps.len()));
    results.insert("class_count".into(), json!(result.classes.len()));
    results.insert("orbit_sizes".into(), json!(result.orbit_sizes));
    results.insert("classes".into(), json!(result.classes));
    let reps: Vec<Value> = result
        .reps
        .iter()
        .map(structure_value)
        .collect::<Result<_, _>>()?;
    results.insert("reps".into(), Value::Array(reps));

    let mut all_true = true;
    if args.verify {
        let convex = verify_convexity(&result)?;
        let antichain = verify_antichain(&result)?;
        all_true = convex && antichain;
        results.insert("convexity".into(), json!(convex));
        results.insert("antichain".into(), json!(antichain));
    }
    if let Some(dot_path) = &args.dot {
        fs::write(dot_path, to_dot(&result))?;
    }

    emit_report(
        &RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command: "condorder",
            inputs: BTreeMap::new(),
            seed: args.sample.map(|_| args.seed),
            results: Value::Object(results),
        },
        args.out.as_deref(),
    )?;
    Ok(if all_true { 0 } else { 1 })
}

fn cmd_formula(what: &FormulaCmd) -> CmdResult {
    match what {
        FormulaCmd::Classify { formula, out } => {
            let f = parse(formula)?;
            emit_report(
                &RunReport {
                    version: env!("CARGO_PKG_VERSION"),
                    command: "formula",
                    inputs: BTreeMap::new(),
                    seed: None,
                    results: json!({
                        "formula": f.to_string(),
                        "classes": classify(&f),
                    }),
                },
                out.as_deref(),
            )?;
            Ok(0)
        }
        FormulaCmd::Transform { op, formula, out } => {
            let f = parse(formula)?;
            let (name, g) = match op {
                OpArg::C => ("c", transform_c(&f)),
                OpArg::Neg => ("neg", transform_neg(&f)),
            };
            emit_report(
                &RunReport {
                    version: env!("CARGO_PKG_VERSION"),
                    command: "formula",
                    inputs: BTreeMap::new(),
                    seed: None,
                    results: json!({
                        "input": f.to_string(),
                        "op": name,
                        "output": g.to_string(),
                    }),
                },
                out.as_deref(),
            )?;
            Ok(0)
        }
        FormulaCmd::Eval { input, formula, out } => {
            let (s, in_hash) = read_structure(input)?;
            let f = parse(formula)?;
            let value = evaluate(&s, &f, &Valuation::new())?;
            emit_report(
                &RunReport {
                    version: env!("CARGO_PKG_VERSION"),
                    command: "formula",
                    inputs: BTreeMap::from([("in", in_hash)]),
                    seed: None,
                    results: json!({
                        "formula": f.to_string(),
                        "value": value,
                    }),
                },
                out.as_deref(),
            )?;
            Ok(if value { 0 } else { 1 })
        }
    }
}

fn run(command: &Cmd) -> CmdResult {
    match command {
        Cmd::Check(args) => cmd_check(args),
        Cmd::Saturate(args) => cmd_saturate(args),
        Cmd::Census(args) => cmd_census(args),
        Cmd::Gallery { what } => cmd_gallery(what),
        Cmd::Condorder(args) => cmd_condorder(args),
        Cmd::Formula { what } => cmd_formula(what),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let started = Instant::now();
    let outcome = run(&cli.command);
    eprintln!("revex {name}: {:.1?}", started.elapsed());
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                CoreError::BudgetExceeded { .. } | CoreError::OrbitCapExceeded { .. } => 3,
                _ => 2,
            })
        }
    }
}
