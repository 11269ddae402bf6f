//! `stablepoly` command-line front end.
//!
//! Exit codes: 0 member (or no failures), 1 non-member (or failures
//! recorded), 3 undetermined, 2 usage errors and malformed input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use stablepoly::classes::{
    in_polypos1, interlaces, is_real_rooted, is_stable, routh_stable, stable_on_positive_orthant, upper_refute,
    OrthantGrid, Status,
};
use stablepoly::lab::generators::Polypos2Kind;
use stablepoly::lab::{paper_identity_suite, run_conjecture, run_identity_check, LabConfig, SuiteReport, IDENTITY_CHECKS};
use stablepoly::polycore::coef::parse_rational;
use stablepoly::polycore::{MultiPoly, PolyMatrix, Vars};
use stablepoly::tpcheck::{
    is_totally_positive, is_totally_stable, is_totally_upper, minors_up_to, TpMode, DEFAULT_ORDER_CAP,
};
use stablepoly::transforms::{apply, TransformId, TransformParams, Transformed};

#[derive(Parser, Debug)]
#[command(name = "stablepoly", version, about = "Stability-preserving polynomial transforms and their checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Global {
    /// Seed for every sampled step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; csv is available for fuzz and reproduce.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest minor order to examine.
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    /// Tolerance for float-domain verdicts; exact verdicts ignore it.
    #[arg(long, global = true, default_value_t = 0.0)]
    tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test one polynomial for membership in a class.
    Check(CheckArgs),
    /// Apply a transform and write the result.
    Transform(TransformArgs),
    /// Run a randomized conjecture suite.
    Fuzz(FuzzArgs),
    /// Re-run the fixed exact computations.
    Reproduce(ReproduceArgs),
    /// Stream the minors of a matrix and classify it.
    Minors(MinorsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ClassId {
    Stable,
    Routh,
    RealRooted,
    Polypos1,
    Interlacing,
    Orthant,
    Upper,
}

#[derive(Args, Debug)]
struct PolyInput {
    /// Polynomial JSON file, or `-` for standard input.
    input: Option<PathBuf>,
    /// Inline polynomial expression instead of a file.
    #[arg(long, conflicts_with = "input", requires = "vars")]
    expr: Option<String>,
    /// Comma-separated variable list for `--expr`.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    class: ClassId,
    #[command(flatten)]
    poly: PolyInput,
    /// Second polynomial for `interlacing`.
    #[arg(long = "with")]
    with: Option<PathBuf>,
    /// Grid values for `orthant`, comma separated.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<String>,
    /// Extra random orthant points.
    #[arg(long, default_value_t = 4)]
    grid_random: usize,
    /// Sample count for `upper`.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long)]
    op: String,
    #[command(flatten)]
    poly: PolyInput,
    /// Second polynomial for `q2b`.
    #[arg(long = "with")]
    with: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    i: usize,
    /// Divide derivatives by factorials in `q4a`.
    #[arg(long)]
    scaled: bool,
    /// Matrix truncation size.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    cols: Vec<usize>,
    /// Linear-form factors `b:c` for `q7`, comma separated.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<String>,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long)]
    conjecture: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Polynomial source for `q7_tp`.
    #[arg(long, value_enum, default_value_t = Generator::LinearForms)]
    generator: Generator,
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
enum Generator {
    LinearForms,
    PsdPencil,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Run a single sub-check.
    #[arg(long)]
    only: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Weak,
    Strict,
    Stable,
    Upper,
}

#[derive(Args, Debug)]
struct MinorsArgs {
    /// Matrix JSON file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Weak)]
    mode: Mode,
}

/// Usage or input error, reported with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<u8, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global.clone();
    let code = match cli.command {
        Command::Check(a) => check(&g, a),
        Command::Transform(a) => transform(&g, a),
        Command::Fuzz(a) => fuzz(&g, a),
        Command::Reproduce(a) => reproduce(&g, a),
        Command::Minors(a) => minors(&g, a),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Member | Status::MemberSampled => 0,
        Status::NonMember => 1,
        Status::Undetermined => 3,
    }
}

fn read_text(path: &PathBuf) -> Result<String, Usage> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// A polynomial file, or a transform output whose `result` is one.
fn read_poly(path: &PathBuf) -> Result<MultiPoly, Usage> {
    let v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let v = match v {
        Value::Object(mut m) if m.contains_key("result") && !m.contains_key("vars") => m.remove("result").unwrap_or_default(),
        other => other,
    };
    serde_json::from_value(v).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// A matrix file, or a transform output whose `matrix` is one.
fn read_matrix(path: &PathBuf) -> Result<PolyMatrix, Usage> {
    let v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let v = match v {
        Value::Object(mut m) if m.contains_key("matrix") => m.remove("matrix").unwrap_or_default(),
        other => other,
    };
    serde_json::from_value(v).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load(p: &PolyInput) -> Result<(MultiPoly, String), Usage> {
    match (&p.input, &p.expr) {
        (_, Some(e)) => Ok((MultiPoly::parse(e, &Vars::new(&p.vars))?, format!("expr:{e}"))),
        (Some(path), None) => Ok((read_poly(path)?, path.display().to_string())),
        (None, None) => Err(Usage("an input file or --expr is required".into())),
    }
}

fn emit(g: &Global, text: &str) -> Result<(), Usage> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &g.out {
        Some(p) => fs::write(p, body).map_err(|e| Usage(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn json_only(g: &Global, cmd: &str) -> Result<(), Usage> {
    match g.format {
        Some(Format::Csv) => Err(Usage(format!("--format csv is not available for {cmd}"))),
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serialization is infallible")
}

fn check(g: &Global, a: CheckArgs) -> Run {
    json_only(g, "check")?;
    let (f, source) = load(&a.poly)?;
    let grid = grid_of(&a, g)?;
    let verdict = match a.class {
        ClassId::Stable => is_stable(&f, g.tol)?,
        ClassId::Routh => routh_stable(&f)?,
        ClassId::RealRooted => is_real_rooted(&f)?,
        ClassId::Polypos1 => in_polypos1(&f)?,
        ClassId::Interlacing => {
            let path = a.with.as_ref().ok_or_else(|| Usage("--with is required for interlacing".into()))?;
            interlaces(&f, &read_poly(path)?)?
        }
        ClassId::Orthant => {
            let main = f.vars().names().first().cloned().ok_or_else(|| Usage("polynomial has no variables".into()))?;
            stable_on_positive_orthant(&f, &main, &grid)?
        }
        ClassId::Upper => upper_refute(&f, a.samples, g.seed),
    };
    let config = json!({
        "subcommand": "check",
        "input": source,
        "with": a.with.as_ref().map(|p| p.display().to_string()),
        "class": a.class,
        "seed": g.seed,
        "tol": g.tol,
        "grid": grid.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "grid_random": a.grid_random,
        "samples": a.samples,
    });
    emit(g, &pretty(&json!({ "config": config, "verdict": verdict })))?;
    Ok(status_code(verdict.status))
}

fn grid_of(a: &CheckArgs, g: &Global) -> Result<OrthantGrid, Usage> {
    let mut grid = OrthantGrid { extra_random: a.grid_random, seed: g.seed, tol: g.tol, ..OrthantGrid::default() };
    if !a.grid.is_empty() {
        grid.values = a.grid.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
    }
    Ok(grid)
}

fn transform(g: &Global, a: TransformArgs) -> Run {
    json_only(g, "transform")?;
    let id: TransformId = a.op.parse()?;
    let factors = a
        .factors
        .iter()
        .map(|s| {
            let (b, c) = s.split_once(':').ok_or_else(|| Usage(format!("factor `{s}` is not of the form b:c")))?;
            Ok((parse_rational(b)?, parse_rational(c)?))
        })
        .collect::<Result<Vec<_>, Usage>>()?;
    let (f, source) = if id == TransformId::Q7 && !factors.is_empty() && a.poly.input.is_none() && a.poly.expr.is_none() {
        (None, None)
    } else {
        let (f, s) = load(&a.poly)?;
        (Some(f), Some(s))
    };
    let second = a.with.as_ref().map(read_poly).transpose()?;
    let params = TransformParams {
        k: a.k,
        d: a.d,
        i: a.i,
        scaled: a.scaled,
        size: a.size,
        rows: a.rows.clone(),
        cols: a.cols.clone(),
        factors,
    };
    let out = apply(id, f.as_ref(), second.as_ref(), &params)?;
    let config = json!({
        "subcommand": "transform",
        "input": source,
        "with": a.with.as_ref().map(|p| p.display().to_string()),
        "op": id.as_str(),
        "k": a.k,
        "d": a.d,
        "i": a.i,
        "scaled": a.scaled,
        "size": a.size,
        "rows": a.rows,
        "cols": a.cols,
        "factors": a.factors,
    });
    let body = match out {
        Transformed::Poly(t) => json!({
            "config": config,
            "result": t.result,
            "normalization_sign": t.normalization_sign,
            "raw": t.raw,
        }),
        Transformed::Matrix(m) => json!({ "config": config, "matrix": m }),
    };
    emit(g, &pretty(&body))?;
    Ok(0)
}

fn fuzz(g: &Global, a: FuzzArgs) -> Run {
    let cfg = LabConfig {
        max_degree: a.max_degree,
        q7_generator: match a.generator {
            Generator::LinearForms => Polypos2Kind::LinearForms,
            Generator::PsdPencil => Polypos2Kind::PsdPencil,
        },
        order_cap: g.order_cap,
        ..LabConfig::default()
    };
    let report = run_conjecture(&a.conjecture, a.trials, g.seed, &cfg)?;
    let text = match g.format {
        Some(Format::Csv) => report.to_csv()?,
        _ => report.to_json(),
    };
    emit(g, &text)?;
    Ok(if report.failures.is_empty() { 0 } else { 1 })
}

fn reproduce(g: &Global, a: ReproduceArgs) -> Run {
    let report = match &a.only {
        Some(id) => {
            if !IDENTITY_CHECKS.contains(&id.as_str()) {
                return Err(Usage(format!("unknown sub-check `{id}`; known: {}", IDENTITY_CHECKS.join(", "))));
            }
            let c = run_identity_check(id)?;
            let all_pass = c.pass;
            SuiteReport { checks: vec![c], all_pass }
        }
        None => paper_identity_suite()?,
    };
    let text = match g.format {
        None => report.to_table(),
        Some(Format::Json) => pretty(&json!({
            "config": { "subcommand": "reproduce", "only": a.only },
            "report": report,
        })),
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "expected", "computed", "pass"])?;
            for c in &report.checks {
                w.write_record([c.id.as_str(), &c.expected, &c.computed, if c.pass { "pass" } else { "FAIL" }])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Usage(e.to_string()))?)?
        }
    };
    emit(g, &text)?;
    Ok(if report.all_pass { 0 } else { 1 })
}

fn minors(g: &Global, a: MinorsArgs) -> Run {
    json_only(g, "minors")?;
    let m = read_matrix(&a.input)?;
    let dim = m.rows().min(m.cols());
    let cap = match g.order_cap {
        Some(0) => return Err(Usage("--order-cap must be positive".into())),
        Some(c) if c > dim => return Err(Usage(format!("--order-cap {c} exceeds the matrix dimension {dim}"))),
        Some(c) => c,
        None => DEFAULT_ORDER_CAP.min(dim),
    };
    if matches!(a.mode, Mode::Weak | Mode::Strict) && !m.is_constant() {
        return Err(Usage(format!("mode {:?} needs constant entries", a.mode).to_lowercase()));
    }
    let mut lines = String::new();
    for rep in minors_up_to(&m, cap) {
        lines.push_str(&serde_json::to_string(&rep?)?);
        lines.push('\n');
    }
    let verdict = match a.mode {
        Mode::Weak => is_totally_positive(&m, cap, TpMode::Weak)?,
        Mode::Strict => is_totally_positive(&m, cap, TpMode::Strict)?,
        Mode::Stable => is_totally_stable(&m, cap)?,
        Mode::Upper => is_totally_upper(&m, cap)?,
    };
    let config = json!({
        "subcommand": "minors",
        "input": a.input.display().to_string(),
        "mode": a.mode,
        "order_cap": cap,
    });
    lines.push_str(&serde_json::to_string(&json!({ "config": config, "verdict": verdict }))?);
    emit(g, &lines)?;
    Ok(status_code(verdict.status))
}
