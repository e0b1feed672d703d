//! Command line front end. The `knotstat` binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ann::{Activation, TrainConfig};
use crate::error::{Error, ErrorKind, Result};
use crate::experiments::{
    distill_formula, evaluate_model, formula_mape, phase_sweep, run_correlation_table, run_error_tables, scatter_csv,
    train_model, AnnConfig, InputInvariant, TableConfig, TargetInvariant, TrainedModel, RESULT_SCHEMA_VERSION,
};
use crate::invariants::{determinant, mahler_measure, rescale, root_of_unity_modulus, RootOfUnity, DEFAULT_MAHLER_POINTS};
use crate::knot_data::{check_khovanov_alternating, filter_class, load_dataset, Dataset, KnotClass};

/// Bundled hand-checked sample of small hyperbolic knots.
pub const DEFAULT_DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixture_knots.csv");

/// Constants of the published volume formula at phase `3 pi / 4`.
pub const PUBLISHED_FORMULA: (f64, f64, f64) = (6.20, 6.77, 0.94);

#[derive(Debug, Parser)]
#[command(name = "knotstat", version, about = "Knot invariant statistics and neural-network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Knot table (CSV or JSON)
    #[arg(long, default_value = DEFAULT_DATA)]
    data: PathBuf,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Knot class: all, alt or nonalt
    #[arg(long, default_value = "all")]
    class: KnotClass,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a knot table and report per-class counts
    Validate(Common),
    /// Determinant, Mahler measure and root-of-unity value for every knot
    Derive(DeriveArgs),
    /// Pearson correlations of the rescaled invariants with every hyperbolic target
    Correlate(Common),
    /// Full error tables: networks, linear regressions and the mean base line
    Tables(TablesArgs),
    /// Train a network on a seeded split and save it
    TrainAnn(TrainArgs),
    /// Score a saved network on a knot table
    Evaluate(EvaluateArgs),
    /// Fit target ~ a ln(|J(e^{i phase})| + b) - c
    Distill(DistillArgs),
    /// Rank roots of unity by volume correlation
    Sweep(SweepArgs),
    /// Export scatter data and the fitted line for one scalar input
    Scatter(ScatterArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct DeriveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = DEFAULT_MAHLER_POINTS)]
    mahler_points: usize,
    /// Root of unity as k/n
    #[arg(long, default_value = "3/5")]
    zeta: String,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TablesArgs {
    #[command(flatten)]
    common: Common,
    /// JSON table configuration; command line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Hidden layer widths, comma separated
    #[arg(long)]
    hidden: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    /// jones or khovanov
    #[arg(long, default_value = "jones")]
    input: InputInvariant,
    #[arg(long, default_value = "vol")]
    target: TargetInvariant,
    #[arg(long, default_value = "100,100")]
    hidden: String,
    #[arg(long, default_value = "relu")]
    activation: Activation,
    #[arg(long, default_value_t = 400)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 32)]
    batch: usize,
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    #[arg(long)]
    no_standardize: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
struct EvaluateArgs {
    #[command(flatten)]
    common: Common,
    /// Model file written by train-ann
    #[arg(long)]
    model: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
struct DistillArgs {
    #[command(flatten)]
    common: Common,
    /// k/n (root of unity), Xpi/Y, or radians
    #[arg(long, default_value = "3pi/4")]
    phase: String,
    #[arg(long, default_value = "vol")]
    target: TargetInvariant,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Comma separated k/n list; default is every reduced k/n with n <= 12
    #[arg(long)]
    phases: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ScatterArgs {
    #[command(flatten)]
    common: Common,
    /// det, mahler or zeta
    #[arg(long, default_value = "zeta")]
    input: InputInvariant,
    #[arg(long, default_value = "vol")]
    target: TargetInvariant,
}

/// Parses and runs one command line, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Divergence { .. } = e {
                eprintln!("hint: try a smaller --lr");
            }
            exit_code(e.kind())
        }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Numeric => 3,
    }
}

/// Phase in radians from `k/n` (meaning `2 pi k / n`), `Xpi/Y`, `Xpi`, or a plain number.
pub fn parse_phase(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse phase {text:?}; use k/n, Xpi/Y or radians"));
    let num = |t: &str| -> Result<f64> { t.parse::<f64>().map_err(|_| bad()) };
    if let Some((head, tail)) = s.split_once("pi") {
        let x = if head.is_empty() { 1.0 } else { num(head)? };
        let y = match tail.strip_prefix('/') {
            Some(d) => num(d)?,
            None if tail.is_empty() => 1.0,
            None => return Err(bad()),
        };
        return Ok(x * PI / y);
    }
    if let Some((k, n)) = s.split_once('/') {
        let k: i64 = k.parse().map_err(|_| bad())?;
        let n: i64 = n.parse().map_err(|_| bad())?;
        return Ok(RootOfUnity::new(k, n)?.angle());
    }
    num(&s)
}

pub fn parse_root_of_unity(text: &str) -> Result<RootOfUnity> {
    let bad = || Error::Config(format!("expected k/n, got {text:?}"));
    let (k, n) = text.trim().split_once('/').ok_or_else(bad)?;
    RootOfUnity::new(k.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?)
}

fn parse_widths(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad layer width {s:?}")))
        })
        .collect()
}

/// Every reduced fraction `k/n` with `0 < k < n <= max_n`.
pub fn default_phases(max_n: i64) -> Vec<RootOfUnity> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (2..=max_n)
        .flat_map(|n| (1..n).filter(move |&k| gcd(k, n) == 1).map(move |k| RootOfUnity { k, n }))
        .collect()
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a C,
    result: R,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<C: Serialize, R: Serialize>(out: Option<&Path>, command: &str, config: &C, result: R) -> Result<()> {
    let env = Envelope {
        schema_version: RESULT_SCHEMA_VERSION,
        command,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    emit(out, &text)
}

fn load(common: &Common) -> Result<Dataset> {
    load_dataset(&common.data)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Validate(c) => validate(&c),
        Command::Derive(a) => derive(&a),
        Command::Correlate(c) => correlate(&c),
        Command::Tables(a) => tables(&a),
        Command::TrainAnn(a) => train_ann(&a),
        Command::Evaluate(a) => evaluate(&a),
        Command::Distill(a) => distill(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Scatter(a) => scatter(&a),
    }
}

#[derive(Serialize)]
struct ValidationSummary {
    records: usize,
    alternating: usize,
    non_alternating: usize,
    max_crossings: Option<u32>,
    with_volume: usize,
    with_khovanov: usize,
    /// Alternating knots whose Khovanov data is not thin or disagrees with the Jones polynomial.
    khovanov_mismatches: Vec<String>,
}

fn validate(c: &Common) -> Result<()> {
    let ds = load(c)?;
    let counts = ds.class_counts();
    let khovanov_mismatches = ds
        .iter()
        .filter(|r| r.alternating && r.khovanov.is_some())
        .filter(|r| !check_khovanov_alternating(r).unwrap_or(false))
        .map(|r| r.name.clone())
        .collect();
    let summary = ValidationSummary {
        records: counts.all,
        alternating: counts.alternating,
        non_alternating: counts.non_alternating,
        max_crossings: ds.max_crossings(),
        with_volume: ds.iter().filter(|r| r.hyperbolic.vol.is_some()).count(),
        with_khovanov: ds.iter().filter(|r| r.khovanov.is_some()).count(),
        khovanov_mismatches,
    };
    match c.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => emit_json(c.out.as_deref(), "validate", c, &summary),
        _ => emit(
            c.out.as_deref(),
            &format!(
                "records {}\nalt {}\nnonalt {}\nmax crossings {}\nwith volume {}\nwith khovanov {}\nkhovanov mismatches {}\n",
                summary.records,
                summary.alternating,
                summary.non_alternating,
                summary.max_crossings.map_or("-".into(), |m| m.to_string()),
                summary.with_volume,
                summary.with_khovanov,
                summary.khovanov_mismatches.len()
            ),
        ),
    }
}

#[derive(Serialize)]
struct DerivedRow {
    name: String,
    degree: usize,
    det: Option<u64>,
    mahler: f64,
    zeta_modulus: f64,
    rescaled_det: Option<f64>,
    rescaled_mahler: Option<f64>,
    rescaled_zeta: Option<f64>,
}

fn derive(a: &DeriveArgs) -> Result<()> {
    let ds = filter_class(&load(&a.common)?, a.common.class);
    let zeta = parse_root_of_unity(&a.zeta)?;
    let mut rows = Vec::with_capacity(ds.len());
    for r in &ds {
        let deg = r.jones.degree();
        let det = determinant(&r.jones).ok();
        let mahler = mahler_measure(&r.jones, a.mahler_points)?;
        let zeta_modulus = root_of_unity_modulus(&r.jones, zeta.k, zeta.n)?;
        rows.push(DerivedRow {
            name: r.name.clone(),
            degree: deg,
            det,
            mahler,
            zeta_modulus,
            rescaled_det: det.and_then(|d| rescale(d as f64, deg).ok()),
            rescaled_mahler: rescale(mahler, deg).ok(),
            rescaled_zeta: rescale(zeta_modulus, deg).ok(),
        });
    }
    match a.common.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => emit_json(a.common.out.as_deref(), "derive", a, &rows),
        _ => {
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            let mut text = String::from("name,degree,det,mahler,zeta_modulus,rescaled_det,rescaled_mahler,rescaled_zeta\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.name,
                    r.degree,
                    r.det.map_or(String::new(), |d| d.to_string()),
                    r.mahler,
                    r.zeta_modulus,
                    opt(r.rescaled_det),
                    opt(r.rescaled_mahler),
                    opt(r.rescaled_zeta)
                ));
            }
            emit(a.common.out.as_deref(), &text)
        }
    }
}

fn correlate(c: &Common) -> Result<()> {
    let table = run_correlation_table(&load(c)?)?;
    match c.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => emit_json(c.out.as_deref(), "correlate", c, &table),
        _ => emit(c.out.as_deref(), &table.render_text()),
    }
}

fn tables(a: &TablesArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<TableConfig>(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => TableConfig {
            split_seed: a.common.seed,
            ann: AnnConfig {
                train: TrainConfig {
                    seed: a.common.seed,
                    ..TrainConfig::default()
                },
                ..AnnConfig::default()
            },
            ..TableConfig::default()
        },
    };
    if let Some(e) = a.epochs {
        cfg.ann.train.epochs = e;
    }
    if let Some(h) = &a.hidden {
        cfg.ann.hidden = parse_widths(h)?;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    let ds = load(&a.common)?;
    let result = run_error_tables(&ds, &cfg)?;
    match a.common.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => emit_json(a.common.out.as_deref(), "tables", a, &result),
        _ => emit(
            a.common.out.as_deref(),
            &format!("{}{}", result.render_mape(), result.render_relative_mse()),
        ),
    }
}

fn train_ann(a: &TrainArgs) -> Result<()> {
    let ds = load(&a.common)?;
    let ann = AnnConfig {
        hidden: parse_widths(&a.hidden)?,
        activation: a.activation,
        train: TrainConfig {
            learning_rate: a.lr,
            batch_size: a.batch,
            epochs: a.epochs,
            momentum: a.momentum,
            seed: a.common.seed,
            input_standardize: !a.no_standardize,
        },
    };
    let model = train_model(&ds, a.input, a.target, a.common.class, &ann, a.split, a.common.seed)?;
    emit_json(a.common.out.as_deref(), "train-ann", a, &model)
}

fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.model).map_err(|e| Error::io(&a.model, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    // accept both the bare model and the train-ann output envelope
    let model: TrainedModel = serde_json::from_value(value.get("result").cloned().unwrap_or(value))?;
    let eval = evaluate_model(&model, &load(&a.common)?)?;
    emit_json(a.common.out.as_deref(), "evaluate", a, &eval)
}

#[derive(Serialize)]
struct DistillResult {
    fit: crate::experiments::FormulaFit,
    /// MAPE of the published constants on the same data, when the phase is 3 pi / 4.
    published_mape: Option<f64>,
}

fn distill(a: &DistillArgs) -> Result<()> {
    let phase = parse_phase(&a.phase)?;
    let ds = filter_class(&load(&a.common)?, a.common.class);
    let fit = distill_formula(&ds, phase, a.target)?;
    let (pa, pb, pc) = PUBLISHED_FORMULA;
    let published_mape = ((phase - 0.75 * PI).abs() < 1e-12 && a.target == TargetInvariant::Vol)
        .then(|| formula_mape(&ds, phase, a.target, pa, pb, pc))
        .transpose()?;
    emit_json(a.common.out.as_deref(), "distill", a, &DistillResult { fit, published_mape })
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let phases = match &a.phases {
        Some(list) => list.split(',').map(parse_root_of_unity).collect::<Result<Vec<_>>>()?,
        None => default_phases(12),
    };
    let ds = filter_class(&load(&a.common)?, a.common.class);
    let ranking = phase_sweep(&ds, &phases)?;
    match a.common.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => emit_json(a.common.out.as_deref(), "sweep", a, &ranking),
        _ => {
            let mut text = String::from("k/n      r       used dropped\n");
            for s in &ranking {
                let r = s.pearson.map_or("-".into(), |r| format!("{r:.4}"));
                text.push_str(&format!("{:<8} {r:<7} {:>5} {:>7}\n", format!("{}/{}", s.k, s.n), s.n_used, s.dropped));
            }
            emit(a.common.out.as_deref(), &text)
        }
    }
}

fn scatter(a: &ScatterArgs) -> Result<()> {
    let ds = load(&a.common)?;
    let (text, summary) = scatter_csv(&ds, a.input, a.target, a.common.class)?;
    match a.common.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => emit_json(a.common.out.as_deref(), "scatter", a, &summary),
        _ => emit(a.common.out.as_deref(), &text),
    }
}
