//! The `mhilb` command line: one subcommand per experiment, a JSON config
//! file overridden by flags, and self-describing CSV or JSON reports.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 usage error,
//! 3 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{
    classify_boundedness, closed_form_norm, dichotomy_scan, schur_e, schur_f, SchurReport,
};
use crate::carleson::{carleson_constant, moment, proposition_check, Measure, Weight};
use crate::normengine::{
    extrapolate, power_iteration, rayleigh_quotient, spectral_oracle_norm, validate_schedule,
    EstimateKind, NormEstimate, SweepPoint, DEFAULT_MAX_ITER, DEFAULT_TOL, ORACLE_MAX_N,
};
use crate::operator::{extremal_sequence, KernelSpec, MeasureKernel, OperatorParams};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Default truncation schedule for `norm --sweep` and `scan`.
pub const DEFAULT_SCHEDULE: [usize; 5] = [100, 500, 2000, 10_000, 30_000];
/// Default schedule for the measure-kernel sweep of `carleson`.
pub const DEFAULT_CARLESON_SCHEDULE: [usize; 3] = [10, 100, 1000];
pub const DEFAULT_N: usize = 1000;
pub const DEFAULT_EPS: [f64; 3] = [0.2, 0.1, 0.05];
pub const DEFAULT_INDICES: [usize; 5] = [2, 3, 10, 100, 10_000];
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
pub const DEFAULT_GAMMA_VALUES: [f64; 4] = [0.5, 0.75, 1.0, 1.25];
/// Slack allowed above a closed-form norm before a report counts as violated.
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Predict,
    Norm,
    Schur,
    Extremal,
    Scan,
    Carleson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Power,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "mhilb", version, about = "Generalized multiplicative Hilbert operator experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Boundedness verdict and closed-form norm.
    Predict {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Power-iteration or spectral-oracle norms, optionally swept and extrapolated.
    Norm {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
        /// Truncation N (indices 2..=N).
        #[arg(long = "N")]
        n: Option<usize>,
        /// Run over --schedule instead of a single N.
        #[arg(long)]
        sweep: bool,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
    },
    /// Schur sums E(m), F(n) against their bounds.
    Schur {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
        #[arg(long = "tail-tol")]
        tail_tol: Option<f64>,
    },
    /// Rayleigh lower bounds from the extremal sequences.
    Extremal {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Rows of the section (default N - 1).
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Truncated norms across gamma with growth fits.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long = "gamma-values", value_delimiter = ',')]
        gamma_values: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Moments, Carleson constant and the sufficiency check for a measure.
    Carleson {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
        /// Measure JSON file (default: Lebesgue measure).
        #[arg(long)]
        measure: Option<PathBuf>,
        /// Carleson exponent (default 1 + (mu - nu)/p).
        #[arg(long)]
        s: Option<f64>,
        /// Moment indices n.
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct ParamFlags {
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Defaults to the critical value 1 + (mu - nu)/p.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    mu: Option<f64>,
    nu: Option<f64>,
    #[serde(rename = "N")]
    n: Option<usize>,
    schedule: Option<Vec<usize>>,
    sweep: Option<bool>,
    method: Option<Method>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    eps: Option<Vec<f64>>,
    rows: Option<usize>,
    indices: Option<Vec<usize>>,
    tail_tol: Option<f64>,
    gamma_values: Option<Vec<f64>>,
    measure_path: Option<PathBuf>,
    s: Option<f64>,
    output_path: Option<PathBuf>,
    output_format: Option<Format>,
}

/// A fully resolved and validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub nu: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub schedule: Vec<usize>,
    pub sweep: bool,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub eps: Vec<f64>,
    pub rows: usize,
    pub indices: Vec<usize>,
    pub tail_tol: f64,
    pub gamma_values: Vec<f64>,
    pub measure_path: Option<PathBuf>,
    pub s: f64,
    pub output_path: Option<PathBuf>,
    pub output_format: Format,
    #[serde(skip)]
    pub measure: Measure,
}

impl RunConfig {
    pub fn params(&self) -> Result<OperatorParams, Error> {
        OperatorParams::new(self.p, self.alpha, self.beta, self.gamma, self.mu, self.nu)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv` (program name first), merges the config file and defaults,
/// and validates everything the chosen subcommand will use.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let text = e.to_string();
        let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
        usage(line.trim().to_string())
    })?;

    let mut flags = Flat::default();
    let (command, common, params) = match cli.command {
        Sub::Predict { common, params } => (Command::Predict, common, params),
        Sub::Norm { common, params, n, sweep, schedule, method, tol, max_iter } => {
            flags = Flat { n, sweep: sweep.then_some(true), schedule, method, tol, max_iter, ..flags };
            (Command::Norm, common, params)
        }
        Sub::Schur { common, params, indices, tail_tol } => {
            flags = Flat { indices, tail_tol, ..flags };
            (Command::Schur, common, params)
        }
        Sub::Extremal { common, params, n, eps, rows } => {
            flags = Flat { n, eps, rows, ..flags };
            (Command::Extremal, common, params)
        }
        Sub::Scan { common, params, gamma_values, schedule, tol } => {
            flags = Flat { gamma_values, schedule, tol, ..flags };
            (Command::Scan, common, params)
        }
        Sub::Carleson { common, params, measure, s, indices, schedule } => {
            flags = Flat { measure_path: measure, s, indices, schedule, ..flags };
            (Command::Carleson, common, params)
        }
    };

    let file = match &common.config {
        Some(path) => serde_json::from_str::<FileConfig>(&read_file(path)?)
            .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?,
        None => FileConfig::default(),
    };

    let p = params.p.or(file.p).unwrap_or(2.0);
    let mu = params.mu.or(file.mu).unwrap_or(0.0);
    let nu = params.nu.or(file.nu).unwrap_or(0.0);
    let critical = if p != 0.0 { 1.0 + (mu - nu) / p } else { f64::NAN };
    let n = flags.n.or(file.n).unwrap_or(DEFAULT_N);
    let default_schedule: &[usize] =
        if command == Command::Carleson { &DEFAULT_CARLESON_SCHEDULE } else { &DEFAULT_SCHEDULE };
    let measure_path = flags.measure_path.or(file.measure_path);
    let measure = match &measure_path {
        Some(path) => Measure::from_json(&read_file(path)?)
            .map_err(|e| usage(format!("invalid measure {}: {e}", path.display())))?,
        None => Measure::lebesgue(),
    };

    let config = RunConfig {
        command,
        p,
        alpha: params.alpha.or(file.alpha).unwrap_or(1.0),
        beta: params.beta.or(file.beta).unwrap_or(1.0),
        gamma: params.gamma.or(file.gamma).unwrap_or(critical),
        mu,
        nu,
        n,
        schedule: flags.schedule.or(file.schedule).unwrap_or_else(|| default_schedule.to_vec()),
        sweep: flags.sweep.or(file.sweep).unwrap_or(false),
        method: flags.method.or(file.method).unwrap_or(Method::Power),
        tol: flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        max_iter: flags.max_iter.or(file.max_iter).unwrap_or(DEFAULT_MAX_ITER),
        eps: flags.eps.or(file.eps).unwrap_or_else(|| DEFAULT_EPS.to_vec()),
        rows: flags.rows.or(file.rows).unwrap_or(n.saturating_sub(1)),
        indices: flags.indices.or(file.indices).unwrap_or_else(|| DEFAULT_INDICES.to_vec()),
        tail_tol: flags.tail_tol.or(file.tail_tol).unwrap_or(DEFAULT_TAIL_TOL),
        gamma_values: flags.gamma_values.or(file.gamma_values).unwrap_or_else(|| DEFAULT_GAMMA_VALUES.to_vec()),
        measure_path,
        s: flags.s.or(file.s).unwrap_or(critical),
        output_path: common.output.or(file.output_path),
        output_format: common.format.or(file.output_format).unwrap_or(Format::Csv),
        measure,
    };
    validate(&config)?;
    Ok(config)
}

#[derive(Default)]
struct Flat {
    n: Option<usize>,
    sweep: Option<bool>,
    schedule: Option<Vec<usize>>,
    method: Option<Method>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    eps: Option<Vec<f64>>,
    rows: Option<usize>,
    indices: Option<Vec<usize>>,
    tail_tol: Option<f64>,
    gamma_values: Option<Vec<f64>>,
    measure_path: Option<PathBuf>,
    s: Option<f64>,
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    if c.command == Command::Carleson {
        MeasureKernel::new(c.p, c.mu, c.nu, c.gamma, Measure::empty())?;
        if !(c.s.is_finite() && c.s > 0.0) {
            return Err(usage(format!("--s must be positive, got {}", c.s)));
        }
    } else {
        c.params()?;
    }
    let positive_tol = |t: f64| t > 0.0 && t < 1.0;
    match c.command {
        Command::Predict => {}
        Command::Norm => {
            if !positive_tol(c.tol) {
                return Err(usage(format!("--tol must lie in (0, 1), got {}", c.tol)));
            }
            if c.max_iter < 1 {
                return Err(usage("--max-iter must be at least 1"));
            }
            let sizes: Vec<usize> = if c.sweep { c.schedule.clone() } else { vec![c.n] };
            if c.sweep {
                validate_schedule(&c.schedule)?;
            } else if c.n < 2 {
                return Err(usage(format!("--N must be >= 2, got {}", c.n)));
            }
            if c.method != Method::Power {
                if c.p != 2.0 {
                    return Err(usage(format!("--method {:?} needs p = 2", c.method).to_lowercase()));
                }
                if let Some(&big) = sizes.iter().find(|&&n| n > ORACLE_MAX_N) {
                    return Err(usage(format!("the spectral oracle is capped at N = {ORACLE_MAX_N}, got {big}")));
                }
            }
        }
        Command::Schur => {
            if c.indices.is_empty() || c.indices.iter().any(|&i| i < 2) {
                return Err(usage("--indices must be a nonempty list of integers >= 2"));
            }
            if !(c.tail_tol > 0.0 && c.tail_tol.is_finite()) {
                return Err(usage(format!("--tail-tol must be positive, got {}", c.tail_tol)));
            }
        }
        Command::Extremal => {
            if c.n < 2 {
                return Err(usage(format!("--N must be >= 2, got {}", c.n)));
            }
            if c.rows < 1 {
                return Err(usage("--rows must be at least 1"));
            }
            if c.eps.is_empty() || c.eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                return Err(usage("--eps must be a nonempty list of positive numbers"));
            }
        }
        Command::Scan => {
            if !positive_tol(c.tol) {
                return Err(usage(format!("--tol must lie in (0, 1), got {}", c.tol)));
            }
            validate_schedule(&c.schedule)?;
            if c.gamma_values.is_empty() {
                return Err(usage("--gamma-values must not be empty"));
            }
            for &g in &c.gamma_values {
                OperatorParams::new(c.p, c.alpha, c.beta, g, c.mu, c.nu)?;
            }
        }
        Command::Carleson => {
            validate_schedule(&c.schedule)?;
            if c.indices.is_empty() || c.indices.iter().any(|&i| i < 2) {
                return Err(usage("--indices must be a nonempty list of integers >= 2"));
            }
        }
    }
    Ok(())
}

/// A rendered report and whether it records a violated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub violation: bool,
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Value>>,
    /// Extra top-level JSON entries, also emitted as `# key: json` CSV trailers.
    extra: Vec<(&'static str, Value)>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(config: &RunConfig, table: Table) -> String {
    let config_json = serde_json::to_value(config).expect("config serializes");
    match config.output_format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "# config: {config_json}").unwrap();
            writeln!(out, "{}", table.columns.join(",")).unwrap();
            for row in &table.rows {
                writeln!(out, "{}", row.iter().map(cell).collect::<Vec<_>>().join(",")).unwrap();
            }
            for (key, value) in &table.extra {
                writeln!(out, "# {key}: {value}").unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    Value::Object(table.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect())
                })
                .collect();
            let mut doc = serde_json::Map::new();
            doc.insert("config".into(), config_json);
            doc.insert("rows".into(), Value::Array(rows));
            for (key, value) in table.extra {
                doc.insert(key.into(), value);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn method_name(kind: EstimateKind) -> &'static str {
    match kind {
        EstimateKind::PowerIteration => "power",
        EstimateKind::SpectralOracle => "oracle",
        EstimateKind::RayleighLowerBound => "rayleigh",
    }
}

/// Closed-form norm when `params` sit at the critical exponent.
fn critical_bound(params: &OperatorParams) -> Option<f64> {
    closed_form_norm(params).ok()
}

fn run_predict(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = c.params()?;
    let v = classify_boundedness(&params);
    let norm = critical_bound(&params);
    let row = vec![
        json!(c.p),
        json!(c.alpha),
        json!(c.beta),
        json!(c.gamma),
        json!(c.mu),
        json!(c.nu),
        json!(v.critical_gamma),
        json!(v.margin),
        json!(v.tag.as_str()),
        norm.map_or(Value::Null, |x| json!(x)),
    ];
    let columns = &["p", "alpha", "beta", "gamma", "mu", "nu", "critical_gamma", "margin", "verdict", "norm"];
    Ok((Table { columns, rows: vec![row], extra: vec![] }, false))
}

fn estimate_row(e: &NormEstimate) -> Vec<Value> {
    vec![
        json!(e.truncation_n),
        json!(e.value),
        json!(e.residual),
        json!(e.iterations),
        json!(method_name(e.kind)),
    ]
}

fn run_norm(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = c.params()?;
    let spec = KernelSpec::Standard(params);
    let sizes: Vec<usize> = if c.sweep { c.schedule.clone() } else { vec![c.n] };
    let mut rows = vec![];
    let mut primary = vec![];
    for &n in &sizes {
        if c.method != Method::Oracle {
            let e = power_iteration(&spec, n, c.tol, c.max_iter)?;
            rows.push(estimate_row(&e));
            primary.push(SweepPoint { n, estimate: e });
        }
        if c.method != Method::Power {
            let e = spectral_oracle_norm(&spec, n)?;
            rows.push(estimate_row(&e));
            if c.method == Method::Oracle {
                primary.push(SweepPoint { n, estimate: e });
            }
        }
    }
    let bound = critical_bound(&params);
    let violation = bound.is_some_and(|b| primary.iter().any(|p| p.estimate.value > b + NORM_SLACK));
    let mut extra = vec![];
    if let Some(b) = bound {
        extra.push(("closed_form_norm", json!(b)));
    }
    if primary.len() >= 4 {
        let x = extrapolate(&primary)?;
        extra.push(("extrapolation", serde_json::to_value(x).expect("serializes")));
    }
    let columns = &["N", "estimate", "residual", "iterations", "method"];
    Ok((Table { columns, rows, extra }, violation))
}

fn schur_row(r: &SchurReport) -> Vec<Value> {
    vec![
        json!(r.kind.as_str()),
        json!(r.index),
        json!(r.sum_value),
        json!(r.tail_bound),
        json!(r.rhs),
        json!(r.satisfied),
    ]
}

fn run_schur(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = c.params()?;
    let mut rows = vec![];
    let mut violation = false;
    let mut uncertified = vec![];
    for f in [schur_e, schur_f] {
        for &i in &c.indices {
            match f(&params, i, c.tail_tol) {
                Ok(r) => {
                    violation |= !r.satisfied;
                    rows.push(schur_row(&r));
                }
                Err(Error::Certification(msg)) => {
                    violation = true;
                    uncertified.push(json!({ "index": i, "reason": msg }));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let extra = if uncertified.is_empty() { vec![] } else { vec![("uncertified", Value::Array(uncertified))] };
    let columns = &["kind", "index", "sum", "tail", "rhs", "satisfied"];
    Ok((Table { columns, rows, extra }, violation))
}

fn run_extremal(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = c.params()?;
    let spec = KernelSpec::Standard(params);
    let bound = critical_bound(&params);
    let mut rows = vec![];
    let mut violation = false;
    for &eps in &c.eps {
        let a = extremal_sequence(&params, eps, c.n)?;
        let r = rayleigh_quotient(&spec, &a, c.rows)?;
        violation |= bound.is_some_and(|b| r.value > b + NORM_SLACK);
        rows.push(vec![json!(eps), json!(c.n), json!(c.rows), json!(r.value), bound.map_or(Value::Null, |b| json!(b))]);
    }
    let columns = &["eps", "N", "rows", "estimate", "closed_form_norm"];
    Ok((Table { columns, rows, extra: vec![] }, violation))
}

fn run_scan(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let base = c.params()?;
    let scan = dichotomy_scan(&base, &c.gamma_values, &c.schedule, c.tol)?;
    let mut rows = vec![];
    let mut violation = false;
    for row in &scan {
        let bound = critical_bound(&base.with_gamma(row.gamma)?);
        for pt in &row.points {
            violation |= bound.is_some_and(|b| pt.estimate.value > b + NORM_SLACK);
            rows.push(vec![
                json!(row.gamma),
                json!(pt.n),
                json!(pt.estimate.value),
                row.theta.map_or(Value::Null, |t| json!(t)),
                json!(row.verdict.tag.as_str()),
            ]);
        }
    }
    let columns = &["gamma", "N", "estimate", "theta_fit", "verdict"];
    Ok((Table { columns, rows, extra: vec![] }, violation))
}

fn run_carleson(c: &RunConfig) -> Result<(Table, bool), CliError> {
    let m = &c.measure;
    let mut rows = vec![];
    for &n in &c.indices {
        rows.push(vec![json!("moment"), json!(n), json!(moment(m, c.gamma, n)?)]);
    }
    let report = carleson_constant(m, Weight::Gamma(c.gamma), c.s)?;
    rows.push(vec![json!("carleson_constant"), Value::Null, json!(report.constant)]);
    rows.push(vec![json!("witness_t"), Value::Null, json!(report.witness_t)]);
    rows.push(vec![json!("is_carleson"), Value::Null, json!(report.is_carleson)]);
    let prop = proposition_check(m, c.p, c.mu, c.nu, c.gamma, &c.schedule)?;
    for pt in &prop.sweep {
        rows.push(vec![json!("sweep"), json!(pt.n), json!(pt.estimate.value)]);
    }
    rows.push(vec![json!("moment_cap"), Value::Null, json!(prop.moment_cap)]);
    rows.push(vec![json!("cap"), Value::Null, json!(prop.cap)]);
    rows.push(vec![json!("consistent"), Value::Null, json!(prop.consistent)]);
    let columns = &["quantity", "n", "value"];
    Ok((Table { columns, rows, extra: vec![] }, !prop.consistent))
}

/// Runs a validated config and returns its report.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    let (table, violation) = match config.command {
        Command::Predict => run_predict(config)?,
        Command::Norm => run_norm(config)?,
        Command::Schur => run_schur(config)?,
        Command::Extremal => run_extremal(config)?,
        Command::Scan => run_scan(config)?,
        Command::Carleson => run_carleson(config)?,
    };
    Ok(Report { text: render(config, table), violation })
}

/// Executes `config`, writes the report, and returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let result = execute(config).and_then(|report| {
        match &config.output_path {
            Some(path) => fs::write(path, &report.text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{}", report.text),
        }
        Ok(report.violation)
    });
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("mhilb: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary: parse, run, and map every outcome to an exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            print!("{e}");
            return EXIT_OK;
        }
    }
    match parse_config(argv) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("mhilb: {e}");
            e.exit_code()
        }
    }
}
