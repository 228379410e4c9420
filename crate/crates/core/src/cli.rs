//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failures, 2 input errors, 3 no
//! bound applicable or supported, 4 enumeration budget exceeded. Data goes
//! to stdout, diagnostics to stderr. JSON output carries a
//! `schema_version` field.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{self, BoundError, Side};
use crate::catalogue::{self, CatalogueError};
use crate::characteristics::{self as ch, CharValue};
use crate::oracle::{self, OracleError, SweepOptions, DEFAULT_BUDGET};
use crate::properties::{self as pr, NbVerdict, PatternClass};
use crate::semantics::{evaluate_with, Aggregator, DefaultPolicy, Domain, Feature, PatternSpec, TimeSeries};
use crate::sigre::{self, Word};

pub const SCHEMA_VERSION: u32 = 1;
pub const BUDGET_ENV: &str = "SIGPAT_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoBound(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoBound(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::InvalidArgument(_) | BoundError::Characteristic(_) => CliError::Input(e.to_string()),
            _ => CliError::NoBound(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            OracleError::Semantics(_) => CliError::Input(e.to_string()),
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Md,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "sigpat",
    version,
    about = "Characteristics, properties and sharp bounds of signature patterns"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PatternArgs {
    /// Catalogue name (e.g. peak, dec_ter) or a regular expression over < = >.
    pattern: String,
    /// Right trimming constant for raw expressions (default 0).
    #[arg(long)]
    a: Option<usize>,
    /// Left trimming constant for raw expressions (default 0).
    #[arg(long)]
    b: Option<usize>,
}

#[derive(Debug, Args)]
struct DomainArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    lo: i64,
    #[arg(long, allow_negative_numbers = true)]
    hi: i64,
}

impl DomainArgs {
    fn domain(&self) -> Result<Domain, CliError> {
        Domain::new(self.lo, self.hi).map_err(input)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute all characteristics of a pattern for a domain.
    Chars {
        #[command(flatten)]
        pattern: PatternArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Series length for the range (default ω + 3).
        #[arg(long)]
        n: Option<usize>,
        /// Word-length cap of the overlap and variation searches (default 2ω + 2).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
        format: OutputFormat,
    },
    /// Derive a bound on the result variable.
    Bound {
        /// nb, max_width, sum_width, min_width, or AGGREGATOR_FEATURE (e.g. max_min).
        gf: String,
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        side: Side,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
        format: OutputFormat,
    },
    /// Evaluate a constraint on a ground series.
    Eval {
        /// nb, max_width, sum_width, min_width, or AGGREGATOR_FEATURE (e.g. sum_surf).
        gf: String,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        series: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
        format: OutputFormat,
    },
    /// Check bounds against exhaustive enumeration.
    Verify {
        /// Catalogue names; use --all for the whole catalogue.
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Comma-separated subset of nb, max_width, sum_width, min_width.
        #[arg(long, value_delimiter = ',')]
        gf: Vec<String>,
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Comma-separated domains lo:hi.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0:1,0:2,0:3",
            allow_hyphen_values = true
        )]
        domains: Vec<String>,
        /// Maximum number of series per enumeration.
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Print every case, not only failures.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
        format: OutputFormat,
    },
    /// Print the catalogue tables.
    Table {
        which: TableKind,
        /// Compare against the reference data shipped with the catalogue.
        #[arg(long)]
        diff_golden: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
        format: OutputFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Patterns,
    Characteristics,
    Properties,
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Chars {
            pattern,
            domain,
            n,
            cap,
            format,
        } => cmd_chars(&pattern, domain.domain()?, n, cap, format, out),
        Command::Bound {
            gf,
            pattern,
            side,
            n,
            domain,
            format,
        } => cmd_bound(&gf, &pattern, side, n, domain.domain()?, format, out),
        Command::Eval {
            gf,
            pattern,
            series,
            format,
        } => cmd_eval(&gf, &pattern, &series, format, out),
        Command::Verify {
            names,
            all,
            gf,
            min_n,
            max_n,
            domains,
            budget,
            verbose,
            format,
        } => cmd_verify(
            VerifyArgs {
                names,
                all,
                gf,
                min_n,
                max_n,
                domains,
                budget,
                verbose,
            },
            format,
            out,
            err,
        ),
        Command::Table {
            which,
            diff_golden,
            format,
        } => cmd_table(which, diff_golden, format, out),
    }
}

// ---------------------------------------------------------------------
// Rendering.

/// A rectangular result for the human, markdown and CSV renderers.
#[derive(Debug, Clone, Default)]
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Table {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (k, c) in r.iter().enumerate() {
                w[k] = w[k].max(c.chars().count());
            }
        }
        w
    }

    fn human(&self) -> String {
        let w = self.widths();
        let line = |cells: &[String]| -> String {
            let s: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{c:<width$}", width = w[k]))
                .collect();
            s.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(&self.headers);
        let rule: Vec<String> = w.iter().map(|&k| "-".repeat(k)).collect();
        s += &line(&rule);
        for r in &self.rows {
            s += &line(r);
        }
        s
    }

    fn markdown(&self) -> String {
        let esc = |c: &String| c.replace('|', "\\|");
        let mut s = format!("| {} |\n", self.headers.iter().map(esc).collect::<Vec<_>>().join(" | "));
        s += &format!("|{}\n", "---|".repeat(self.headers.len()));
        for r in &self.rows {
            s += &format!("| {} |\n", r.iter().map(esc).collect::<Vec<_>>().join(" | "));
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(|e| CliError::Io(e.into()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.into()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 cells"))
    }
}

/// Pretty JSON through `Value`, so that parsing and re-rendering the
/// output reproduces it byte for byte.
pub fn render_json(command: &str, data: impl Serialize) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "data": serde_json::to_value(data).expect("serializable report"),
    });
    serde_json::to_string_pretty(&v).expect("JSON value") + "\n"
}

fn emit(
    out: &mut dyn Write,
    format: OutputFormat,
    command: &str,
    data: impl Serialize,
    table: &Table,
    human: Option<String>,
) -> Result<(), CliError> {
    let text = match format {
        OutputFormat::Json => render_json(command, data),
        OutputFormat::Md => table.markdown(),
        OutputFormat::Csv => table.csv()?,
        OutputFormat::Human => human.unwrap_or_else(|| table.human()),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn key_value_human(t: &Table) -> String {
    let w = t.rows.iter().map(|r| r[0].chars().count()).max().unwrap_or(0);
    t.rows
        .iter()
        .map(|r| format!("{:<w$}  {}\n", format!("{}:", r[0]), r[1], w = w + 1))
        .collect()
}

// ---------------------------------------------------------------------
// Inputs.

fn looks_like_expression(s: &str) -> bool {
    s.chars().any(|c| "<=>".contains(c))
}

fn resolve(p: &PatternArgs) -> Result<PatternSpec, CliError> {
    match catalogue::lookup(&p.pattern) {
        Ok(e) => {
            let spec = match (p.a, p.b) {
                (None, None) => e.spec().clone(),
                (a, b) => PatternSpec::new(e.name.clone(), e.spec().ast.clone(), a.unwrap_or(e.a), b.unwrap_or(e.b)),
            };
            Ok(spec)
        }
        Err(e @ CatalogueError::UnknownPattern { .. }) => {
            if !looks_like_expression(&p.pattern) {
                return Err(input(e));
            }
            let ast = sigre::parse(&p.pattern).map_err(|e| input(format!("cannot parse {:?}: {e}", p.pattern)))?;
            Ok(PatternSpec::new(
                p.pattern.clone(),
                ast,
                p.a.unwrap_or(0),
                p.b.unwrap_or(0),
            ))
        }
    }
}

/// `nb`, `max_width`, `sum_width`, `min_width` or `AGGREGATOR_FEATURE`.
fn parse_gf(s: &str) -> Result<(Aggregator, Feature), CliError> {
    let t = s.to_ascii_lowercase().replace('-', "_");
    if t == "nb" {
        return Ok((Aggregator::Sum, Feature::One));
    }
    let (g, f) = t.split_once('_').ok_or_else(|| {
        input(format!(
            "unknown aggregator/feature {s:?} (expected e.g. nb, max_width, sum_surf)"
        ))
    })?;
    Ok((g.parse().map_err(input)?, f.parse().map_err(input)?))
}

fn gf_name(g: Aggregator, f: Feature) -> String {
    if (g, f) == (Aggregator::Sum, Feature::One) {
        "nb".into()
    } else {
        format!("{g}_{f}").to_lowercase()
    }
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn show_set(s: &std::collections::BTreeSet<Word>) -> String {
    let v: Vec<String> = s.iter().map(|w| w.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn show_ec(x: Option<(u8, u8)>) -> String {
    x.map_or("undefined".into(), |(e, c)| format!("({e},{c})"))
}

// ---------------------------------------------------------------------
// Commands.

fn cmd_chars(
    p: &PatternArgs,
    d: Domain,
    n: Option<usize>,
    cap: Option<usize>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let spec = resolve(p)?;
    let omega = ch::width(&spec).map_err(input)?;
    let n = n.unwrap_or(omega + 3);
    if n < 2 {
        return Err(input("series length must be at least 2"));
    }
    let rep = ch::report(&spec, d, n, cap).map_err(input)?;
    let mut t = Table::new(&["characteristic", "value"]);
    let rows = [
        ("pattern", spec.name.clone()),
        ("expression", spec.ast.to_string()),
        ("a", spec.a.to_string()),
        ("b", spec.b.to_string()),
        ("domain", d.to_string()),
        ("n", n.to_string()),
        ("cap", rep.cap.to_string()),
        ("width ω", rep.omega.to_string()),
        ("height η", rep.eta.to_string()),
        ("range φ(n)", rep.range_at_n.to_string()),
        ("range (e,c)", show_ec(rep.range_params)),
        ("inducing Θ", show_set(&rep.inducing)),
        ("overlap o", rep.overlap.to_string()),
        ("variation δ", rep.variation.to_string()),
    ];
    for (k, v) in rows {
        t.push(vec![k.to_string(), v]);
    }
    let data = json!({
        "pattern": spec.name,
        "expression": spec.ast.to_string(),
        "a": spec.a,
        "b": spec.b,
        "report": rep,
    });
    let human = key_value_human(&t);
    emit(out, format, "chars", data, &t, Some(human))?;
    Ok(0)
}

fn cmd_bound(
    gf: &str,
    p: &PatternArgs,
    side: Side,
    n: usize,
    d: Domain,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (g, f) = parse_gf(gf)?;
    let spec = resolve(p)?;
    let b = bounds::bound(g, f, side, &spec, n, d)?;
    let mut t = Table::new(&["field", "value"]);
    t.push(vec![
        "bound".into(),
        format!("{} {side} ({})", gf_name(g, f), spec.name),
    ]);
    t.push(vec!["value".into(), b.value.to_string()]);
    t.push(vec!["sharp".into(), yes(b.sharp)]);
    t.push(vec!["source".into(), b.source.clone()]);
    if let Some(m) = b.m_used {
        t.push(vec!["interval cap m".into(), m.to_string()]);
    }
    for (label, ok) in &b.preconditions {
        t.push(vec![format!("precondition {label}"), yes(*ok)]);
    }
    let data = json!({
        "pattern": spec.name,
        "aggregator": g,
        "feature": f,
        "n": n,
        "domain": d,
        "bound": b,
    });
    let human = key_value_human(&t);
    emit(out, format, "bound", data, &t, Some(human))?;
    Ok(0)
}

fn cmd_eval(
    gf: &str,
    p: &PatternArgs,
    series: &str,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (g, f) = parse_gf(gf)?;
    let spec = resolve(p)?;
    let t: TimeSeries = series.parse().map_err(input)?;
    let ev = evaluate_with(&spec, f, g, &t, &DefaultPolicy::default()).map_err(input)?;
    let widths: Vec<i64> = ev
        .occurrences
        .iter()
        .map(|&o| crate::semantics::feature_of(&spec, Feature::Width, &t, o))
        .collect::<Result<_, _>>()
        .map_err(input)?;
    let mut tab = Table::new(&["occurrence", "i", "j", "width", "feature"]);
    for (k, o) in ev.occurrences.iter().enumerate() {
        tab.push(vec![
            (k + 1).to_string(),
            o.i.to_string(),
            o.j.to_string(),
            widths[k].to_string(),
            ev.features[k].to_string(),
        ]);
    }
    let mut human = format!(
        "N = {}\nsignature: {}\noccurrences: {}\n",
        ev.value,
        ev.signature,
        ev.occurrences.len()
    );
    if !tab.rows.is_empty() {
        human += &tab.human();
    }
    let data = json!({
        "pattern": spec.name,
        "aggregator": g,
        "feature": f,
        "series": t.to_string(),
        "value": ev.value,
        "signature": ev.signature,
        "occurrences": ev.occurrences,
        "widths": widths,
        "features": ev.features,
    });
    emit(out, format, "eval", data, &tab, Some(human))?;
    Ok(0)
}

struct VerifyArgs {
    names: Vec<String>,
    all: bool,
    gf: Vec<String>,
    min_n: usize,
    max_n: usize,
    domains: Vec<String>,
    budget: u64,
    verbose: bool,
}

fn combos_for(gf: &[String]) -> Result<Vec<(Aggregator, Feature, Side)>, CliError> {
    use Aggregator as A;
    use Feature as F;
    if gf.is_empty() {
        return Ok(bounds::SUPPORTED.to_vec());
    }
    let mut out = Vec::new();
    for name in gf {
        let add: &[(A, F, Side)] = match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "nb" => &[(A::Sum, F::One, Side::Lower), (A::Sum, F::One, Side::Upper)],
            "max_width" => &[(A::Max, F::Width, Side::Upper)],
            "sum_width" => &[(A::Sum, F::Width, Side::Upper)],
            "min_width" => &[(A::Min, F::Width, Side::Lower)],
            _ => return Err(input(format!("no bound to verify for {name:?}"))),
        };
        for c in add {
            if !out.contains(c) {
                out.push(*c);
            }
        }
    }
    Ok(out)
}

fn cmd_verify(a: VerifyArgs, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mut specs: Vec<PatternSpec> = Vec::new();
    if a.all {
        specs.extend(catalogue::all().iter().map(|e| e.spec().clone()));
    }
    for name in &a.names {
        let p = PatternArgs {
            pattern: name.clone(),
            a: None,
            b: None,
        };
        specs.push(resolve(&p)?);
    }
    if specs.is_empty() {
        return Err(input("no pattern given (name patterns or pass --all)"));
    }
    let combos = combos_for(&a.gf)?;
    let domains: Vec<Domain> = a
        .domains
        .iter()
        .map(|s| s.parse::<Domain>().map_err(input))
        .collect::<Result<_, _>>()?;
    if a.min_n < 2 || a.min_n > a.max_n {
        return Err(input(format!("invalid length range {}..={}", a.min_n, a.max_n)));
    }
    let refs: Vec<&PatternSpec> = specs.iter().collect();
    let opts = SweepOptions {
        budget: a.budget,
        perturb: 0,
    };
    let rep = oracle::sharpness_report(&refs, &combos, a.min_n..=a.max_n, &domains, opts)?;
    let mut t = Table::new(&[
        "pattern", "bound", "side", "n", "domain", "status", "value", "sharp", "detail",
    ]);
    for c in &rep.cases {
        if !a.verbose && !c.outcome.is_failure() {
            continue;
        }
        let (status, value, sharp, detail) = match &c.outcome {
            oracle::Outcome::Pass { bound, attained } => (
                "pass",
                bound.value.to_string(),
                yes(bound.sharp),
                if *attained {
                    "attained".to_string()
                } else {
                    String::new()
                },
            ),
            oracle::Outcome::Invalid {
                bound,
                value,
                counterexample,
            } => (
                "invalid",
                bound.value.to_string(),
                yes(bound.sharp),
                format!("series {counterexample} gives {value}"),
            ),
            oracle::Outcome::NotAttained { bound, best } => (
                "not attained",
                bound.value.to_string(),
                yes(bound.sharp),
                format!("best {best}"),
            ),
            oracle::Outcome::Skipped { reason } => ("skipped", String::new(), String::new(), reason.clone()),
        };
        t.push(vec![
            c.pattern.clone(),
            gf_name(c.aggregator, c.feature),
            c.side.to_string(),
            c.n.to_string(),
            c.domain.to_string(),
            status.to_string(),
            value,
            sharp,
            detail,
        ]);
    }
    let summary = format!(
        "verified {} pattern{}, n in {}..={}, {} domain{}: {} passed, {} failed, {} without a bound\n",
        specs.len(),
        if specs.len() == 1 { "" } else { "s" },
        a.min_n,
        a.max_n,
        domains.len(),
        if domains.len() == 1 { "" } else { "s" },
        rep.passed,
        rep.failed,
        rep.skipped
    );
    let human = if t.rows.is_empty() {
        summary.clone()
    } else {
        format!("{}{summary}", t.human())
    };
    let data = if a.verbose {
        serde_json::to_value(&rep).expect("serializable report")
    } else {
        json!({
            "passed": rep.passed,
            "failed": rep.failed,
            "skipped": rep.skipped,
            "cases": rep.failures().collect::<Vec<_>>(),
        })
    };
    emit(out, format, "verify", data, &t, Some(human))?;
    if format != OutputFormat::Human {
        write!(err, "{summary}")?;
    }
    Ok(if rep.failed == 0 { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
struct ClassRow {
    name: String,
    class: PatternClass,
    verdicts: [NbVerdict; 3],
    nb_simple: Vec<usize>,
    width_max: bool,
    width_sum: Vec<usize>,
    width_occurrence: Vec<usize>,
    golden_class: PatternClass,
}

fn spans_where(eta: usize, f: impl Fn(Domain) -> bool) -> Vec<usize> {
    (eta..=eta + 2).filter(|&s| f(Domain::of_span(s))).collect()
}

fn show_spans(v: &[usize]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn cmd_table(which: TableKind, diff: bool, format: OutputFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    match which {
        TableKind::Patterns => {
            let mut t = Table::new(&["name", "aliases", "expression", "a", "b"]);
            for e in catalogue::all() {
                t.push(vec![
                    e.name.clone(),
                    e.aliases.join(" "),
                    e.expr.clone(),
                    e.a.to_string(),
                    e.b.to_string(),
                ]);
            }
            let data: Vec<Value> = catalogue::all()
                .iter()
                .map(|e| json!({"name": e.name, "aliases": e.aliases, "expr": e.expr, "a": e.a, "b": e.b}))
                .collect();
            emit(out, format, "table patterns", data, &t, None)?;
        }
        TableKind::Characteristics => {
            let mut h = vec![
                "name",
                "omega",
                "eta",
                "e_c",
                "inducing",
                "overlap",
                "variation",
                "range",
            ];
            if diff {
                h.push("golden");
            }
            let mut t = Table::new(&h);
            let mut data = Vec::new();
            for e in catalogue::all() {
                let s = e.spec();
                let omega = ch::width(s).map_err(input)?;
                let eta = ch::height(s).map_err(input)?;
                let mut overlaps = Vec::new();
                let mut variations = Vec::new();
                let mut mismatches = Vec::new();
                for span in eta..=eta + 2 {
                    let r = ch::report(s, Domain::of_span(span), omega + 3, None).map_err(input)?;
                    overlaps.push(r.overlap);
                    variations.push(r.variation);
                    for m in catalogue::golden_check(e, &r) {
                        mismatches.push(format!(
                            "span {span} {}: expected {} got {}",
                            m.characteristic, m.expected, m.got
                        ));
                    }
                }
                let ranges: Vec<CharValue> = (omega + 1..=omega + 4).map(|n| ch::range(s, n)).collect();
                let inducing = ch::inducing_words(s).map_err(input)?;
                let ec = ch::range_params(s);
                let join = |v: &[CharValue]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/");
                let mut row = vec![
                    e.name.clone(),
                    omega.to_string(),
                    eta.to_string(),
                    show_ec(ec),
                    show_set(&inducing),
                    join(&overlaps),
                    join(&variations),
                    join(&ranges),
                ];
                if diff {
                    row.push(if mismatches.is_empty() {
                        "ok".into()
                    } else {
                        mismatches.join("; ")
                    });
                }
                t.push(row);
                let mut obj = json!({
                    "name": e.name,
                    "omega": omega,
                    "eta": eta,
                    "range_params": ec,
                    "inducing": inducing,
                    "overlap_spans": [eta, eta + 1, eta + 2],
                    "overlap": overlaps,
                    "variation": variations,
                    "range_lengths": [omega + 1, omega + 4],
                    "range": ranges,
                });
                if diff {
                    obj["golden_mismatches"] = json!(mismatches);
                }
                data.push(obj);
            }
            let human = format!(
                "{}overlap and variation at spans η, η+1, η+2; range at n = ω+1..ω+4\n",
                t.human()
            );
            emit(out, format, "table characteristics", data, &t, Some(human))?;
        }
        TableKind::Properties => {
            let mut rows = Vec::new();
            for e in catalogue::all() {
                let s = e.spec();
                let eta = ch::height(s).map_err(input)?;
                let (class, verdicts) = pr::classify(s).map_err(input)?;
                rows.push(ClassRow {
                    name: e.name.clone(),
                    class,
                    verdicts,
                    nb_simple: spans_where(eta, |d| pr::nb_simple(s, d).is_ok_and(|c| c.holds)),
                    width_max: pr::width_max(s).is_ok_and(|c| c.holds),
                    width_sum: spans_where(eta, |d| pr::width_sum(s, d).is_ok_and(|c| c.holds)),
                    width_occurrence: spans_where(eta, |d| pr::width_occurrence(s, d).is_ok_and(|c| c.holds)),
                    golden_class: e.golden.class,
                });
            }
            rows.sort_by(|a, b| (a.class, &a.name).cmp(&(b.class, &b.name)));
            let mut h = vec![
                "class",
                "name",
                "nb_overlap",
                "nb_no_overlap",
                "nb_simple",
                "width_max",
                "width_sum",
                "width_occurrence",
            ];
            if diff {
                h.push("golden");
            }
            let mut t = Table::new(&h);
            for r in &rows {
                let eta = ch::height(catalogue::lookup(&r.name).expect("catalogue name").spec()).map_err(input)?;
                let holding = |want: NbVerdict| -> Vec<usize> {
                    (0..3)
                        .filter(|&k| r.verdicts[k] == want || r.verdicts[k] == NbVerdict::Both)
                        .map(|k| eta + k)
                        .collect()
                };
                let mut row = vec![
                    r.class.to_string(),
                    r.name.clone(),
                    show_spans(&holding(NbVerdict::Overlap)),
                    show_spans(&holding(NbVerdict::NoOverlap)),
                    show_spans(&r.nb_simple),
                    yes(r.width_max),
                    show_spans(&r.width_sum),
                    show_spans(&r.width_occurrence),
                ];
                if diff {
                    row.push(if r.class == r.golden_class {
                        "ok".into()
                    } else {
                        format!("expected {}", r.golden_class)
                    });
                }
                t.push(row);
            }
            let mut human = String::new();
            let mut current = None;
            let w = t.widths();
            for (k, r) in rows.iter().enumerate() {
                if current != Some(r.class) {
                    current = Some(r.class);
                    human += &format!("\n{} class\n", r.class);
                }
                let cells: Vec<String> = t.rows[k][1..]
                    .iter()
                    .zip(&t.headers[1..])
                    .enumerate()
                    .map(|(i, (c, hd))| {
                        if i == 0 {
                            format!("  {c:<width$}", width = w[1])
                        } else {
                            format!("{hd}={c}")
                        }
                    })
                    .collect();
                human += &(cells.join("  ") + "\n");
            }
            human += "\nspan-dependent properties list the spans (η..η+2) where they hold\n";
            let human = human.trim_start().to_string();
            let data: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("serializable row");
                    if !diff {
                        v.as_object_mut().expect("row object").remove("golden_class");
                    }
                    v
                })
                .collect();
            emit(out, format, "table properties", data, &t, Some(human))?;
        }
    }
    Ok(0)
}
