//! Command-line front end: argument parsing, report assembly and JSON/CSV
//! encoding.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on
//! usage, field-construction or budget errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::charsum::{char_sum, point_count};
use crate::error::{Error, Result};
use crate::experiments::{
    check_lemma_surjectivity, check_sign_patterns, check_value_probabilities, compare_to_trinomial, moments_from,
    run_distribution, Mode, RunOptions, BUDGET_ENV, DEFAULT_BUDGET,
};
use crate::field::{Elem, FieldSpec};
use crate::models::{build_trinomial, zeta_series_first_mismatch, DEFAULT_CHECK_CONSTANT};
use crate::poly::{check_budget, count_squarefree, sample_squarefree, MonicCursor, Shard, SquarefreeTester};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hyperstat", version, about = "Character sums of square-free polynomials over odd finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a field: modulus, generator and character balance
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distribution of S(F) over square-free F of degree d versus the trinomial model
    Dist {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Moments of S(F)/sqrt(q) versus model and Gaussian moments
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact identities and exhaustive frequency checks
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Draw square-free polynomials and print S(F) and point counts
    Sample {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// #{F in V_d : F(x_i) = a_i, i <= l} = q^(d-l) for every constraint
    LemmaSurjectivity {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        l: usize,
        /// Check this many random constraints instead of all of them
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Frequency of prescribed nonzero values and zeros versus the main term
    Values {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        /// Nonzero prescriptions as x:a pairs, e.g. 0:1,1:2
        #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
        nonzero: Vec<(Elem, Elem)>,
        /// Points where F must vanish, e.g. 2
        #[arg(long, value_delimiter = ',')]
        zeros: Vec<Elem>,
        #[arg(long, default_value_t = DEFAULT_CHECK_CONSTANT)]
        constant: f64,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Frequencies of all 3^q sign patterns of chi(F(x)) versus the model
    Patterns {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_CHECK_CONSTANT)]
        constant: f64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Power-series check of zeta_q(s) = zeta_q(2s) sum_d |F_d| q^(-ds)
    Zeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 30)]
        max_degree: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive square-free counts versus q^d - q^(d-1)
    SquarefreeCount {
        #[command(flatten)]
        field: FieldArgs,
        /// Highest degree checked (all degrees from 0 up are checked)
        #[arg(long)]
        d: usize,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field characteristic (odd prime)
    #[arg(long)]
    pub p: u64,
    /// Extension degree; q = p^k
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// exhaustive | montecarlo
    #[arg(long, default_value = "exhaustive")]
    pub mode: String,
    /// Monte Carlo sample count
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0 = one per core); results do not depend on it
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Largest census, in polynomials
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Constant applied to every O(.) bound
    #[arg(long, default_value_t = DEFAULT_CHECK_CONSTANT)]
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output encoding
    #[arg(long = "out", value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(Elem, Elem), String> {
    let (x, a) = s.split_once(':').ok_or_else(|| format!("expected x:a, got {s:?}"))?;
    let x = x.trim().parse().map_err(|e| format!("bad point {x:?}: {e}"))?;
    let a = a.trim().parse().map_err(|e| format!("bad value {a:?}: {e}"))?;
    Ok((x, a))
}

/// A finished report: its encodings and whether every verdict passed.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub verdict: bool,
    pub text: String,
    pub json: Value,
    pub csv: String,
}

impl Rendered {
    pub fn encode(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
struct Meta {
    command: &'static str,
    p: u32,
    k: u32,
    q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<Value>,
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stream_scheme: Option<&'static str>,
    tool_version: &'static str,
    elapsed_ms: u128,
}

impl Meta {
    fn new(command: &'static str, field: &FieldSpec) -> Self {
        Meta {
            command,
            p: field.p(),
            k: field.k(),
            q: field.q(),
            d: None,
            mode: None,
            n: None,
            seed: None,
            threads: None,
            constant: None,
            budget: None,
            stream_scheme: None,
            tool_version: TOOL_VERSION,
            elapsed_ms: 0,
        }
    }

    fn csv_comment(&self) -> String {
        let v = serde_json::to_value(self).expect("meta serializes");
        let mut out = String::new();
        if let Value::Object(map) = v {
            for (key, val) in map {
                let _ = writeln!(out, "# meta.{key}={}", plain(&val));
            }
        }
        out
    }
}

/// Integers beyond `u64` are written as decimal strings.
fn int_value(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| Value::from(x).to_string()).unwrap_or_default()
}

fn num(x: f64) -> String {
    Value::from(x).to_string()
}

fn build_field(args: &FieldArgs) -> Result<FieldSpec> {
    FieldSpec::new(args.p, args.k)
}

fn run_options(run: &RunArgs) -> Result<RunOptions> {
    Ok(RunOptions {
        mode: run.mode.parse()?,
        samples: run.samples,
        seed: run.seed,
        threads: run.threads,
        budget: run.budget,
    })
}

fn fill_run_meta(meta: &mut Meta, d: usize, opts: &RunOptions, constant: f64) {
    meta.d = Some(d);
    meta.mode = Some(opts.mode);
    meta.threads = Some(opts.threads);
    meta.constant = Some(constant);
    meta.budget = Some(int_value(opts.budget));
    if opts.mode == Mode::Montecarlo {
        meta.n = Some(int_value(opts.samples as u128));
        meta.seed = Some(opts.seed);
        meta.stream_scheme = Some(crate::experiments::STREAM_SCHEME);
    }
}

fn finish(meta: Meta, body: Value, verdict: bool, text: String, csv_body: String) -> Rendered {
    let mut json = json!({ "meta": meta });
    if let (Value::Object(dst), Value::Object(src)) = (&mut json, body) {
        dst.extend(src);
    }
    let csv = format!("{csv_body}{}", meta.csv_comment());
    Rendered { verdict, text, json, csv }
}

/// Runs a parsed command and renders its report.
pub fn run_command(command: &Command) -> Result<(Rendered, OutputArgs)> {
    let started = Instant::now();
    let (mut rendered, output) = match command {
        Command::FieldInfo { field, output } => (field_info(build_field(field)?), output.clone()),
        Command::Dist { field, d, run, output } => {
            (dist(&build_field(field)?, *d, run)?, output.clone())
        }
        Command::Moments { field, d, k_max, run, output } => {
            (moments(&build_field(field)?, *d, *k_max, run)?, output.clone())
        }
        Command::Sample { field, d, count, seed, output } => {
            (sample(&build_field(field)?, *d, *count, *seed)?, output.clone())
        }
        Command::Verify(v) => verify(v)?,
    };
    if let Some(meta) = rendered.json.get_mut("meta") {
        meta["elapsed_ms"] = json!(started.elapsed().as_millis());
    }
    rendered.csv = rendered
        .csv
        .lines()
        .map(|l| {
            if l.starts_with("# meta.elapsed_ms=") {
                format!("# meta.elapsed_ms={}", started.elapsed().as_millis())
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    Ok((rendered, output))
}

fn field_info(field: FieldSpec) -> Rendered {
    let meta = Meta::new("field-info", &field);
    let squares = field.elements().filter(|&a| field.quad_char(a) == 1).count();
    let non_squares = field.elements().filter(|&a| field.quad_char(a) == -1).count();
    let body = json!({
        "modulus": field.modulus(),
        "generator": field.generator(),
        "non_square": field.non_square(),
        "squares": squares,
        "non_squares": non_squares,
        "chi": if field.q() <= 64 { json!(field.elements().map(|a| field.quad_char(a)).collect::<Vec<_>>()) } else { Value::Null },
    });
    let mut text = format!("F_{} = F_{}^{}\n", field.q(), field.p(), field.k());
    if let Some(m) = field.modulus() {
        let _ = writeln!(text, "modulus (constant term first): {m:?}");
        let _ = writeln!(text, "generator index: {}", field.generator().unwrap_or(0));
    }
    let _ = writeln!(text, "nonzero squares: {squares}, non-squares: {non_squares}");
    let _ = writeln!(text, "smallest non-square: {}", field.non_square());
    let csv = format!(
        "q,p,k,squares,non_squares,non_square\n{},{},{},{squares},{non_squares},{}\n",
        field.q(),
        field.p(),
        field.k(),
        field.non_square()
    );
    finish(meta, body, true, text, csv)
}

fn dist(field: &FieldSpec, d: usize, run: &RunArgs) -> Result<Rendered> {
    let opts = run_options(run)?;
    let emp = run_distribution(field, d, &opts)?;
    let model = build_trinomial(field.q() as u64);
    let report = compare_to_trinomial(&emp, &model, run.constant)?;
    let mut meta = Meta::new("dist", field);
    fill_run_meta(&mut meta, d, &opts, run.constant);
    if opts.mode == Mode::Exhaustive {
        meta.n = Some(int_value(emp.total));
    }
    let agg = &report.aggregates;
    let body = json!({ "histogram": report.rows, "aggregates": agg });

    let mut text = format!(
        "S(F) over {} square-free monic F of degree {d} in F_{}[X] ({})\n",
        emp.total,
        field.q(),
        emp.mode
    );
    let _ = writeln!(text, "{:>5} {:>12} {:>14} {:>14} {:>11}", "s", "count", "empirical", "model", "rel_err");
    for r in &report.rows {
        let rel = r.rel_err.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(text, "{:>5} {:>12} {:>14.6e} {:>14.6e} {:>11}", r.s, r.count, r.empirical, r.model, rel);
    }
    let _ = writeln!(
        text,
        "TV distance {:.3e}; max relative error {:.3e}; bound C*q^((3q-d)/2) = {:.3e}{}",
        agg.tv_distance,
        agg.max_rel_err,
        agg.bound,
        if agg.bound_informative { "" } else { " (uninformative: d <= 3q)" }
    );
    let _ = writeln!(text, "verdict: {}", if agg.verdict { "PASS" } else { "FAIL" });

    let mut csv = String::from("s,count,empirical_prob,model_prob,rel_err,abs_err\n");
    for r in &report.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.s,
            r.count,
            num(r.empirical),
            num(r.model),
            opt_num(r.rel_err),
            num(r.abs_err)
        );
    }
    let _ = writeln!(csv, "# tv_distance={}", num(agg.tv_distance));
    let _ = writeln!(csv, "# max_rel_err={}", num(agg.max_rel_err));
    let _ = writeln!(csv, "# bound={}", num(agg.bound));
    let _ = writeln!(csv, "# bound_informative={}", agg.bound_informative);
    let _ = writeln!(csv, "# verdict={}", agg.verdict);
    Ok(finish(meta, body, agg.verdict, text, csv))
}

fn moments(field: &FieldSpec, d: usize, k_max: u32, run: &RunArgs) -> Result<Rendered> {
    let opts = run_options(run)?;
    let emp = run_distribution(field, d, &opts)?;
    let report = moments_from(&emp, k_max, run.constant);
    let mut meta = Meta::new("moments", field);
    fill_run_meta(&mut meta, d, &opts, run.constant);
    if opts.mode == Mode::Exhaustive {
        meta.n = Some(int_value(emp.total));
    }
    let body = json!({ "moments": report.rows, "aggregates": { "verdict": report.verdict } });

    let mut text = format!("moments of S(F)/sqrt(q), q={}, d={d}, {} ({} polynomials)\n", field.q(), emp.mode, emp.total);
    let _ = writeln!(text, "{:>3} {:>14} {:>14} {:>8} {:>11} {:>10}", "k", "empirical", "model", "gauss", "bound/se", "ok");
    for r in &report.rows {
        let scale = r.std_err.unwrap_or(r.bound);
        let _ = writeln!(
            text,
            "{:>3} {:>14.8} {:>14.8} {:>8} {:>11.3e} {:>10}",
            r.k, r.empirical, r.model, r.gaussian, scale, r.verdict
        );
    }
    let _ = writeln!(text, "verdict: {}", if report.verdict { "PASS" } else { "FAIL" });

    let mut csv = String::from("k,empirical,model,gaussian,bound,std_err,z_model,z_gaussian\n");
    for r in &report.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.k,
            num(r.empirical),
            num(r.model),
            r.gaussian,
            num(r.bound),
            opt_num(r.std_err),
            opt_num(r.z_model),
            opt_num(r.z_gaussian)
        );
    }
    let _ = writeln!(csv, "# verdict={}", report.verdict);
    Ok(finish(meta, body, report.verdict, text, csv))
}

fn sample(field: &FieldSpec, d: usize, count: usize, seed: u64) -> Result<Rendered> {
    let mut meta = Meta::new("sample", field);
    meta.d = Some(d);
    meta.seed = Some(seed);
    meta.n = Some(int_value(count as u128));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("index,coeffs,char_sum,point_count\n");
    for i in 0..count {
        let f = sample_squarefree(field, d, &mut rng)?;
        let s = char_sum(field, &f);
        let n = point_count(field, &f);
        let _ = writeln!(text, "{:<40} S = {s:>4}  #C = {n}", f.display());
        let coeffs: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(csv, "{i},{},{s},{n}", coeffs.join(" "));
        rows.push(json!({ "coeffs": f.coeffs(), "display": f.display(), "char_sum": s, "point_count": n }));
    }
    Ok(finish(meta, json!({ "samples": rows }), true, text, csv))
}

fn verify(cmd: &VerifyCommand) -> Result<(Rendered, OutputArgs)> {
    match cmd {
        VerifyCommand::LemmaSurjectivity { field, d, l, trials, seed, budget, output } => {
            let field = build_field(field)?;
            let report = check_lemma_surjectivity(&field, *d, *l, *trials, *seed, *budget)?;
            let mut meta = Meta::new("verify lemma-surjectivity", &field);
            meta.d = Some(*d);
            meta.seed = trials.map(|_| *seed);
            meta.budget = Some(int_value(*budget));
            let text = format!(
                "{} constraints on l={} points over V_{} in F_{}: expected count {} each, {} violations\nverdict: {}\n",
                report.constraints_checked,
                report.l,
                report.d,
                report.q,
                report.expected,
                report.violations.len(),
                pass(report.verdict)
            );
            let csv = format!(
                "q,d,l,expected,constraints_checked,violations,verdict\n{},{},{},{},{},{},{}\n",
                report.q,
                report.d,
                report.l,
                report.expected,
                report.constraints_checked,
                report.violations.len(),
                report.verdict
            );
            let body = serde_json::to_value(&report).expect("report serializes");
            Ok((finish(meta, json!({ "report": body }), report.verdict, text, csv), output.clone()))
        }
        VerifyCommand::Values { field, d, nonzero, zeros, constant, budget, output } => {
            let field = build_field(field)?;
            let r = check_value_probabilities(&field, *d, nonzero, zeros, *constant, *budget)?;
            let mut meta = Meta::new("verify values", &field);
            meta.d = Some(*d);
            meta.constant = Some(*constant);
            meta.budget = Some(int_value(*budget));
            let text = format!(
                "l={} nonzero, m={} zero prescriptions at {:?} -> {:?}\nfrequency {} = {:.8e}; main term {} = {:.8e}\nrelative error {:.3e}; bound {:.3e}\nverdict: {}\n",
                r.l, r.m, r.points, r.values, r.empirical_exact, r.empirical, r.model_exact, r.model, r.rel_err, r.bound, pass(r.verdict)
            );
            let csv = format!(
                "l,m,count,population,empirical,model,rel_err,abs_err,bound,verdict\n{},{},{},{},{},{},{},{},{},{}\n",
                r.l,
                r.m,
                r.count,
                r.population,
                num(r.empirical),
                num(r.model),
                num(r.rel_err),
                num(r.abs_err),
                num(r.bound),
                r.verdict
            );
            let body = serde_json::to_value(&r).expect("report serializes");
            Ok((finish(meta, json!({ "report": body }), r.verdict, text, csv), output.clone()))
        }
        VerifyCommand::Patterns { field, d, constant, threads, budget, output } => {
            let field = build_field(field)?;
            let r = check_sign_patterns(&field, *d, *constant, *threads, *budget)?;
            let mut meta = Meta::new("verify patterns", &field);
            meta.d = Some(*d);
            meta.constant = Some(*constant);
            meta.threads = Some(*threads);
            meta.budget = Some(int_value(*budget));
            let mut text = format!("{} sign patterns over F_{}, d={}\n", r.rows.len(), r.q, r.d);
            let mut csv = String::from("pattern,zeros,count,empirical,model,rel_err\n");
            for row in &r.rows {
                let pat: String = row.pattern.iter().map(|&e| match e { -1 => '-', 0 => '0', _ => '+' }).collect();
                let _ = writeln!(text, "{pat} m={} count={:>10} rel_err={:.3e}", row.zeros, row.count, row.rel_err);
                let _ = writeln!(csv, "{pat},{},{},{},{},{}", row.zeros, row.count, num(row.empirical), num(row.model), num(row.rel_err));
            }
            let _ = writeln!(text, "worst relative error {:.3e}; bound {:.3e}\nverdict: {}", r.worst_rel_err, r.bound, pass(r.verdict));
            let _ = writeln!(csv, "# total_frequency={}", r.total_frequency_exact);
            let _ = writeln!(csv, "# worst_rel_err={}", num(r.worst_rel_err));
            let _ = writeln!(csv, "# bound={}", num(r.bound));
            let _ = writeln!(csv, "# verdict={}", r.verdict);
            let body = json!({
                "patterns": r.rows,
                "aggregates": {
                    "total_frequency": r.total_frequency_exact,
                    "worst_rel_err": r.worst_rel_err,
                    "bound": r.bound,
                    "verdict": r.verdict,
                },
            });
            Ok((finish(meta, body, r.verdict, text, csv), output.clone()))
        }
        VerifyCommand::Zeta { field, max_degree, output } => {
            let field = build_field(field)?;
            let q = field.q() as u64;
            let counts: Vec<BigUint> = (0..=*max_degree).map(|d| count_squarefree(q, d)).collect();
            let mismatch = zeta_series_first_mismatch(q, &counts);
            let verdict = mismatch.is_none();
            let meta = Meta::new("verify zeta", &field);
            let text = format!(
                "zeta series identity for q={q} to degree {max_degree}: {}\nverdict: {}\n",
                mismatch.map_or("all coefficients match".to_string(), |n| format!("mismatch at degree {n}")),
                pass(verdict)
            );
            let csv = format!(
                "q,max_degree,first_mismatch,verdict\n{q},{max_degree},{},{verdict}\n",
                mismatch.map(|n| n.to_string()).unwrap_or_default()
            );
            let body = json!({ "max_degree": max_degree, "first_mismatch": mismatch, "verdict": verdict });
            Ok((finish(meta, body, verdict, text, csv), output.clone()))
        }
        VerifyCommand::SquarefreeCount { field, d, budget, output } => {
            let field = build_field(field)?;
            check_budget(field.q(), *d, *budget)?;
            let q = field.q() as u64;
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut csv = String::from("d,enumerated,formula,match\n");
            let mut tester = SquarefreeTester::new();
            for deg in 0..=*d {
                let mut cursor = MonicCursor::new(&field, &Shard::whole(deg));
                let mut n = 0u64;
                while !cursor.is_done() {
                    if tester.test(&field, cursor.coeffs()) {
                        n += 1;
                    }
                    cursor.advance();
                }
                let formula = count_squarefree(q, deg as u32);
                let ok = BigUint::from(n) == formula;
                let _ = writeln!(text, "d={deg:>3} enumerated={n:>12} formula={formula:>12} {}", pass(ok));
                let _ = writeln!(csv, "{deg},{n},{formula},{ok}");
                rows.push(json!({ "d": deg, "enumerated": n.to_string(), "formula": formula.to_string(), "match": ok }));
            }
            let verdict = rows.iter().all(|r| r["match"] == json!(true));
            let _ = writeln!(text, "verdict: {}", pass(verdict));
            let mut meta = Meta::new("verify squarefree-count", &field);
            meta.d = Some(*d);
            meta.budget = Some(int_value(*budget));
            let body = json!({ "counts": rows, "verdict": verdict });
            Ok((finish(meta, body, verdict, text, csv), output.clone()))
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Parses `args` (program name first), runs the command and captures its
/// output. Reports go to `--output` when given, else to `stdout`.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            return Execution { code, stdout, stderr };
        }
    };
    match run_command(&cli.command) {
        Ok((rendered, output)) => {
            let body = rendered.encode(output.format);
            let code = if rendered.verdict { 0 } else { 1 };
            match &output.output {
                Some(path) => match std::fs::write(path, &body) {
                    Ok(()) => Execution {
                        code,
                        stdout: format!("wrote {}\n", path.display()),
                        stderr: String::new(),
                    },
                    Err(e) => Execution {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Execution { code, stdout: body, stderr: String::new() },
            }
        }
        Err(e) => Execution { code: 2, stdout: String::new(), stderr: format!("error: {}\n", describe(&e)) },
    }
}

fn describe(e: &Error) -> String {
    let kind = match e {
        Error::NotPrime(_) => "NotPrime",
        Error::EvenCharacteristic(_) => "EvenCharacteristic",
        Error::FieldTooLarge { .. } => "FieldTooLarge",
        Error::DivisionByZero => "DivisionByZero",
        Error::SamplingStalled(_) => "SamplingStalled",
        Error::CensusBudgetExceeded { .. } => "CensusBudgetExceeded",
        Error::HistogramOverflow => "HistogramOverflow",
        Error::InvalidMode(_) => "InvalidMode",
        Error::ModelMismatch { .. } => "ModelMismatch",
        Error::InvalidConstraint(_) => "InvalidConstraint",
        Error::InvalidArgument(_) => "InvalidArgument",
    };
    format!("{kind}: {e}")
}
