//! Command-line front end: run named queries or serialized plans against
//! JSON datasets, print plans before and after optimization, and measure the
//! join benchmark.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use collquery::data::{self, value_to_json, Dataset, Descriptor};
use collquery::optimizer::{OptimizeError, PHASE_NAMES};
use collquery::plan::parse_plan_with_roots;
use collquery::queries::{named_query, QueryError};
use collquery::{interpret, optimize, print_plan_pretty, CostCounters, Expr, Pipeline, Value};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_EVAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "collquery", version, about = "Optimize and run reified collection queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a query against a dataset and print the result as JSON.
    Run(RunArgs),
    /// Print a query's plan before and after optimization.
    Explain(ExplainArgs),
    /// Run the equi-join benchmark and print cost counters and timings as JSON.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in query name (records, equijoin).
    #[arg(long)]
    query: Option<String>,
    /// File containing a plan in S-expression form.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Optimization {
    /// Skip optimization.
    #[arg(long, conflicts_with = "phases")]
    no_opt: bool,
    /// Comma-separated optimizer phases to run instead of the default pipeline.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Dataset descriptor (schemas and root collections).
    #[arg(long)]
    schema: PathBuf,
    /// Data document mapping root names to arrays.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    opt: Optimization,
    /// Print the plan before and after optimization to stderr.
    #[arg(long)]
    explain: bool,
    /// Print cost counters and timings to stderr.
    #[arg(long)]
    stats: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExplainArgs {
    #[arg(long)]
    schema: PathBuf,
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    opt: Optimization,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Number of orders and customers.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    join_n: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    no_opt: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}")))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a, out, err),
        Command::Explain(a) => explain(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_descriptor(path: &Path) -> Result<Descriptor, Failure> {
    data::load_descriptor(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_dataset(desc: &Descriptor, path: &Path) -> Result<Dataset, Failure> {
    data::load_data(desc, &read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_query(desc: &Descriptor, source: &Source) -> Result<Expr, Failure> {
    let q = if let Some(name) = &source.query {
        named_query(name, desc).map_err(|e| match e {
            QueryError::UnknownQuery { .. } => usage(e.to_string()),
            _ => invalid(e.to_string()),
        })?
    } else {
        let path = source.plan.as_ref().expect("clap requires --query or --plan");
        parse_plan_with_roots(&read(path)?, &desc.registry, &desc.root_vars())
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?
    };
    if !q.ty().is_data() {
        return Err(invalid(format!("query result type {} is not data", q.ty())));
    }
    Ok(q)
}

fn pipeline(opt: &Optimization) -> Result<Option<Pipeline>, Failure> {
    if opt.no_opt {
        return Ok(None);
    }
    match &opt.phases {
        None => Ok(Some(Pipeline::default())),
        Some(names) => Pipeline::from_names(names).map(Some).map_err(|e| match e {
            OptimizeError::UnknownPhase { name, .. } => {
                usage(format!("unknown phase `{name}`; valid phases: {}", PHASE_NAMES.join(", ")))
            }
            other => usage(other.to_string()),
        }),
    }
}

fn apply(q: &Expr, pipeline: &Option<Pipeline>) -> Result<Expr, Failure> {
    match pipeline {
        None => Ok(q.clone()),
        Some(p) => optimize(q, p).map_err(|e| invalid(format!("optimization failed: {e}"))),
    }
}

fn explain_text(before: &Expr, after: &Expr) -> String {
    format!("before:\n{}\n\nafter:\n{}\n", print_plan_pretty(before), print_plan_pretty(after))
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn counters_json(c: &CostCounters) -> serde_json::Value {
    json!({
        "elementsVisited": c.elements_visited,
        "predicateEvals": c.predicate_evals,
        "hashLookups": c.hash_lookups,
    })
}

/// Renders a result value as pretty JSON followed by a newline.
pub fn result_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&value_to_json(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn run(a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let pipeline = pipeline(&a.opt)?;
    let desc = load_descriptor(&a.schema)?;
    let dataset = load_dataset(&desc, &a.data)?;
    let q = load_query(&desc, &a.source)?;

    let started = Instant::now();
    let optimized = apply(&q, &pipeline)?;
    let optimize_ms = ms(started);
    if a.explain {
        write_output(err, &explain_text(&q, &optimized))?;
    }

    let env = desc.env(&dataset).map_err(|e| invalid(e.to_string()))?;
    let mut counters = CostCounters::default();
    let started = Instant::now();
    let value = interpret(&optimized, &env, &mut counters)
        .map_err(|e| Failure { code: EXIT_EVAL, message: format!("evaluation failed: {e}") })?;
    let interpret_ms = ms(started);

    let text = result_json(&value);
    match &a.out {
        Some(path) => fs::write(path, &text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => write_output(out, &text)?,
    }
    if a.stats {
        let mut stats = counters_json(&counters);
        stats["optimizeMs"] = json!(optimize_ms);
        stats["interpretMs"] = json!(interpret_ms);
        write_output(err, &format!("{stats}\n"))?;
    }
    Ok(())
}

fn explain(a: ExplainArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pipeline = pipeline(&a.opt)?;
    let desc = load_descriptor(&a.schema)?;
    let q = load_query(&desc, &a.source)?;
    let optimized = apply(&q, &pipeline)?;
    write_output(out, &explain_text(&q, &optimized))
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let n = usize::try_from(a.join_n).map_err(|_| usage("--join-n is too large"))?;
    let (desc, dataset) = data::gen_join_benchmark(n, a.seed);
    let q = named_query("equijoin", &desc).map_err(|e| invalid(e.to_string()))?;
    let pipeline = if a.no_opt { None } else { Some(Pipeline::default()) };

    let started = Instant::now();
    let plan = apply(&q, &pipeline)?;
    let optimize_ms = ms(started);

    let env = desc.env(&dataset).map_err(|e| invalid(e.to_string()))?;
    let mut counters = CostCounters::default();
    let started = Instant::now();
    let value = interpret(&plan, &env, &mut counters)
        .map_err(|e| Failure { code: EXIT_EVAL, message: format!("evaluation failed: {e}") })?;
    let interpret_ms = ms(started);

    let mut report = json!({
        "n": n,
        "seed": a.seed,
        "optimized": !a.no_opt,
        "resultSize": value.len().unwrap_or(0),
    });
    for (k, v) in counters_json(&counters).as_object().expect("object") {
        report[k] = v.clone();
    }
    report["optimizeMs"] = json!(optimize_ms);
    report["interpretMs"] = json!(interpret_ms);
    write_output(out, &format!("{}\n", serde_json::to_string_pretty(&report).expect("JSON serializes")))
}
