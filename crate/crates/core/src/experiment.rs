//! Batch experiments driven by a `key = value` configuration.
//!
//! ```text
//! # minor-arc mass of the constant function
//! experiment = l2_minor
//! N = 10000
//! f = one
//! q_list = 2000, 4000, 8000
//! q0_rule = N_logN_over_Q
//! ```
//!
//! Every key is also accepted as a command-line flag (`--q0-rule` for
//! `q0_rule`). Reports are CSV (header, data rows, then `#` comment lines) or
//! JSON, with numbers printed to 15 significant digits so that re-running a
//! config reproduces the report byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::asymptotics::{
    c0_constant, predicted_lower_bound, smooth_count, smooth_count_prediction, PredictionInput,
    ShapeKind,
};
use crate::circle::{
    build_arc_system, cs_chain_report, exp_sum_grid, exp_sum_point, l2_split, s1_envelope,
    BumpFunction,
};
use crate::error::{ConfigErrors, Error, Result};
use crate::format::fmt_num;
use crate::oracle::{ramanujan_closed_form, ramanujan_cosine_sum};
use crate::sieve::{
    alpha_power_table, arithmetic_table, build_sieve, mobius, ramanujan_row,
    smooth_indicator_table, twisted_sum, AlphaParams, FunctionKind, FunctionTable, PrimeCount,
    SieveContext, SmoothParams,
};
use crate::variance::{variance, variance_bruteforce, variance_profile};

/// Environment variable overriding the worker-thread count of the runner.
pub const THREADS_ENV: &str = "APVAR_THREADS";

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid configurations or arguments.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when an invariant check of the run fails.
pub const EXIT_INVARIANT: i32 = 2;

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown {} '{}' (expected one of: {})",
                        stringify!($name),
                        other,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

named_enum!(ExperimentKind {
    VarianceScaling => "variance_scaling",
    L2Minor => "l2_minor",
    TwistedSweep => "twisted_sweep",
    SmoothCensus => "smooth_census",
    CsChain => "cs_chain",
    Identities => "identities",
});

named_enum!(Q0Rule {
    Absolute => "absolute",
    NLogNOverQ => "N_logN_over_Q",
    PaperD1 => "paper_d1",
    PaperAlpha => "paper_alpha",
});

named_enum!(OutputFormat {
    Csv => "csv",
    Json => "json",
});

/// The moduli bounds `Q` an experiment sweeps.
#[derive(Debug, Clone, PartialEq)]
pub enum QGrid {
    List(Vec<f64>),
    /// `Q_i = floor(min (max/min)^{i/(points-1)})`, deduplicated.
    Geometric {
        min: f64,
        max: f64,
        points: usize,
    },
}

impl QGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            QGrid::List(v) => v.clone(),
            QGrid::Geometric { min, max, points } => {
                let mut out: Vec<f64> = Vec::with_capacity(*points);
                for i in 0..*points {
                    let t = if *points == 1 {
                        0.0
                    } else {
                        i as f64 / (*points - 1) as f64
                    };
                    let raw = min * (max / min).powf(t);
                    let q = (raw * (1.0 + 1e-12)).floor().min(max.floor());
                    if q > 1.0 && out.last() != Some(&q) {
                        out.push(q);
                    }
                }
                out
            }
        }
    }
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n: usize,
    pub f: FunctionKind,
    pub alpha_r: Option<f64>,
    pub y: Option<f64>,
    pub u: Vec<f64>,
    pub q_grid: QGrid,
    pub k: f64,
    pub q0_rule: Q0Rule,
    pub q0: Option<f64>,
    pub q0_c: f64,
    pub grid_mult: f64,
    /// Divisor cutoff `R` for the `cs_chain` comparison function.
    pub r: Option<usize>,
    /// Apply the bump weight; defaults to on for `cs_chain`, off otherwise.
    pub weight: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

const KEYS: &[&str] = &[
    "experiment",
    "n",
    "f",
    "alpha_r",
    "y",
    "u",
    "q_min",
    "q_max",
    "q_points",
    "q_list",
    "k",
    "q0_rule",
    "q0",
    "q0_c",
    "grid_mult",
    "r",
    "weight",
    "out",
    "format",
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let k = key.trim().replace('-', "_");
    let k = match k.as_str() {
        "N" => "n".to_string(),
        "K" => "k".to_string(),
        "R" => "r".to_string(),
        "f_kind" => "f".to_string(),
        "Q0" => "q0".to_string(),
        _ => k.to_lowercase(),
    };
    KEYS.iter().copied().find(|&c| c == k)
}

/// Raw `key = value` entries with their 1-based source lines.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<&'static str, (Option<usize>, String)>,
}

impl RawConfig {
    /// Adds or overrides a key; unknown keys are reported in `errors`.
    pub fn set(&mut self, key: &str, value: &str, line: Option<usize>, errors: &mut ConfigErrors) {
        match canonical_key(key) {
            Some(k) => {
                self.entries.insert(k, (line, value.trim().to_string()));
            }
            None => errors.push(line, format!("unknown key '{}'", key.trim())),
        }
    }

    fn get(&self, key: &str) -> Option<&(Option<usize>, String)> {
        self.entries.get(key)
    }
}

/// Splits config text into raw entries, reporting malformed lines, unknown and
/// duplicate keys.
pub fn parse_raw(text: &str, errors: &mut ConfigErrors) -> RawConfig {
    let mut raw = RawConfig::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(
                Some(lineno),
                format!("expected 'key = value', got '{content}'"),
            );
            continue;
        };
        if let Some(k) = canonical_key(key) {
            if let Some((Some(first), _)) = raw.get(k) {
                errors.push(
                    Some(lineno),
                    format!("duplicate key '{k}' (first set on line {first})"),
                );
                continue;
            }
        }
        raw.set(key, value, Some(lineno), errors);
    }
    raw
}

/// Parses and validates config text; every violation is reported at once.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut errors = ConfigErrors::default();
    let raw = parse_raw(text, &mut errors);
    ExperimentConfig::from_raw(&raw, errors)
}

fn parse_value<T: FromStr>(raw: &RawConfig, key: &str, errors: &mut ConfigErrors) -> Option<T>
where
    T::Err: fmt::Display,
{
    let (line, value) = raw.get(key)?;
    match value.parse::<T>() {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(*line, format!("{key}: cannot parse '{value}': {e}"));
            None
        }
    }
}

fn parse_list(raw: &RawConfig, key: &str, errors: &mut ConfigErrors) -> Option<Vec<f64>> {
    let (line, value) = raw.get(key)?;
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) => {
                errors.push(*line, format!("{key}: '{part}' is not a number"));
                return None;
            }
        }
    }
    Some(out)
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "on" | "bump" => Ok(true),
        "false" | "no" | "off" | "none" => Ok(false),
        other => Err(format!("expected bump/none or true/false, got '{other}'")),
    }
}

impl ExperimentConfig {
    /// Validates raw entries; `errors` may already hold parse-stage problems.
    pub fn from_raw(raw: &RawConfig, mut errors: ConfigErrors) -> Result<Self> {
        let line = |key: &str| raw.get(key).and_then(|(l, _)| *l);

        let experiment = parse_value::<ExperimentKind>(raw, "experiment", &mut errors);
        if raw.get("experiment").is_none() {
            errors.push(None, "missing required key 'experiment'");
        }
        let n = parse_value::<usize>(raw, "n", &mut errors);
        if raw.get("n").is_none() {
            errors.push(None, "missing required key 'N'");
        }
        if let Some(n) = n {
            if n < 16 {
                errors.push(line("n"), format!("N must satisfy N >= 16, got {n}"));
            }
        }
        let needs_f = !matches!(
            experiment,
            Some(ExperimentKind::Identities) | Some(ExperimentKind::SmoothCensus) | None
        );
        let f = parse_value::<FunctionKind>(raw, "f", &mut errors);
        if raw.get("f").is_none() && needs_f {
            errors.push(None, "missing required key 'f'");
        }
        if f == Some(FunctionKind::Custom) {
            errors.push(line("f"), "f = custom cannot be built from a config");
        }
        let alpha_r = parse_value::<f64>(raw, "alpha_r", &mut errors);
        if let Some(r) = alpha_r {
            if r == 0.0 || !r.is_finite() {
                errors.push(line("alpha_r"), "alpha_r must be finite and nonzero");
            } else if 1.0 + 1.0 / r <= 0.0 {
                errors.push(line("alpha_r"), "alpha_r gives alpha = 1 + 1/R <= 0");
            }
        }
        if matches!(
            f,
            Some(FunctionKind::AlphaOmega | FunctionKind::AlphaBigOmega)
        ) && alpha_r.is_none()
            && raw.get("alpha_r").is_none()
        {
            errors.push(line("f"), "alpha tables need alpha_r");
        }
        let y = parse_value::<f64>(raw, "y", &mut errors);
        if let Some(y) = y {
            if !(y >= 2.0) {
                errors.push(line("y"), format!("y must be >= 2, got {y}"));
            }
        }
        let u = parse_list(raw, "u", &mut errors).unwrap_or_default();
        if u.iter().any(|&v| !(v > 0.0)) {
            errors.push(line("u"), "u values must be positive");
        }
        if f == Some(FunctionKind::SmoothIndicator) && y.is_none() && u.len() != 1 {
            errors.push(line("f"), "smooth_indicator needs y or a single u");
        }

        let q_list = parse_list(raw, "q_list", &mut errors);
        let q_min = parse_value::<f64>(raw, "q_min", &mut errors);
        let q_max = parse_value::<f64>(raw, "q_max", &mut errors);
        let q_points = parse_value::<usize>(raw, "q_points", &mut errors);
        let nf = n.unwrap_or(16) as f64;
        let q_grid = match q_list {
            Some(list) => {
                if list.is_empty() {
                    errors.push(line("q_list"), "q_list is empty");
                }
                if list.windows(2).any(|w| w[1] < w[0]) {
                    errors.push(line("q_list"), "q_list must be ascending");
                }
                if list.iter().any(|&q| !(q > 1.0) || q > nf) {
                    errors.push(line("q_list"), format!("every Q must lie in (1, N = {nf}]"));
                }
                QGrid::List(list)
            }
            None => {
                let min = q_min.unwrap_or_else(|| nf.powf(0.7).ceil());
                let max = q_max.unwrap_or(nf);
                let points = q_points.unwrap_or(4);
                if !(min > 1.0) || min > nf {
                    errors.push(
                        line("q_min"),
                        format!("q_min must lie in (1, N = {nf}], got {min}"),
                    );
                }
                if !(max > 1.0) || max > nf {
                    errors.push(
                        line("q_max"),
                        format!("q_max must lie in (1, N = {nf}], got {max}"),
                    );
                }
                if max < min {
                    errors.push(line("q_max"), "q_max must be >= q_min");
                }
                if points == 0 {
                    errors.push(line("q_points"), "q_points must be >= 1");
                }
                QGrid::Geometric { min, max, points }
            }
        };

        let k = parse_value::<f64>(raw, "k", &mut errors).unwrap_or(5.0);
        if !(k >= 5.0) {
            errors.push(line("k"), format!("K must be >= 5, got {k}"));
        }
        let q0_rule =
            parse_value::<Q0Rule>(raw, "q0_rule", &mut errors).unwrap_or(Q0Rule::NLogNOverQ);
        let q0 = parse_value::<f64>(raw, "q0", &mut errors);
        if q0_rule == Q0Rule::Absolute && q0.is_none() {
            errors.push(line("q0_rule"), "q0_rule = absolute needs q0");
        }
        if q0_rule == Q0Rule::PaperAlpha && alpha_r.is_none() {
            errors.push(line("q0_rule"), "q0_rule = paper_alpha needs alpha_r");
        }
        let q0_c = parse_value::<f64>(raw, "q0_c", &mut errors).unwrap_or(1.0);
        if !(q0_c > 0.0) {
            errors.push(line("q0_c"), "q0_c must be positive");
        }
        let grid_mult = parse_value::<f64>(raw, "grid_mult", &mut errors).unwrap_or(4.0);
        if !(grid_mult >= 1.0) {
            errors.push(
                line("grid_mult"),
                format!("grid_mult must be >= 1 (M >= N), got {grid_mult}"),
            );
        }
        let r = parse_value::<usize>(raw, "r", &mut errors);
        if let (Some(r), Some(n)) = (r, n) {
            if r == 0 || r > n {
                errors.push(line("r"), format!("R must lie in 1..=N, got {r}"));
            }
        }
        let weight = match raw.get("weight") {
            Some((l, v)) => match parse_bool(v) {
                Ok(b) => Some(b),
                Err(e) => {
                    errors.push(*l, format!("weight: {e}"));
                    None
                }
            },
            None => None,
        };
        let out = raw.get("out").map(|(_, v)| PathBuf::from(v));
        let format =
            parse_value::<OutputFormat>(raw, "format", &mut errors).unwrap_or(OutputFormat::Csv);

        if !errors.is_empty() {
            errors.0.sort_by_key(|v| v.line.unwrap_or(usize::MAX));
            return Err(Error::Config(errors));
        }
        Ok(ExperimentConfig {
            experiment: experiment.expect("validated"),
            n: n.expect("validated"),
            f: f.unwrap_or(FunctionKind::One),
            alpha_r,
            y,
            u,
            q_grid,
            k,
            q0_rule,
            q0,
            q0_c,
            grid_mult,
            r,
            weight,
            out,
            format,
        })
    }

    /// `Q0` for a given `Q` under the configured rule.
    pub fn q0_for(&self, q: f64) -> f64 {
        let n = self.n as f64;
        match self.q0_rule {
            Q0Rule::Absolute => self.q0.expect("validated"),
            Q0Rule::NLogNOverQ => n * n.ln() / q,
            Q0Rule::PaperD1 => self.q0_c * n * n / (q * q),
            Q0Rule::PaperAlpha => {
                let r = self.alpha_r.expect("validated");
                n * r * r * n.ln().powi(15) / q
            }
        }
    }

    /// Grid size `M = ceil(grid_mult * N)`.
    pub fn grid_size(&self) -> usize {
        (self.grid_mult * self.n as f64).ceil() as usize
    }

    fn smooth_params(&self) -> Result<SmoothParams> {
        match (self.y, self.u.as_slice()) {
            (Some(y), _) => SmoothParams::new(y, self.n),
            (None, [u]) => SmoothParams::from_u(*u, self.n),
            _ => Err(Error::InvalidArgument(
                "smooth_indicator needs y or a single u".into(),
            )),
        }
    }

    /// The function table the experiment runs on.
    pub fn build_table(&self, ctx: &SieveContext) -> Result<FunctionTable> {
        match self.f {
            FunctionKind::AlphaOmega | FunctionKind::AlphaBigOmega => {
                let variant = if self.f == FunctionKind::AlphaOmega {
                    PrimeCount::Omega
                } else {
                    PrimeCount::BigOmega
                };
                let r = self.alpha_r.expect("validated");
                alpha_power_table(ctx, AlphaParams::new(r, variant)?)
            }
            FunctionKind::SmoothIndicator => smooth_indicator_table(ctx, self.smooth_params()?.y),
            kind => arithmetic_table(ctx, kind),
        }
    }

    fn predictor(&self) -> Result<impl Fn(f64) -> f64> {
        let n = self.n as f64;
        let template = match self.f {
            FunctionKind::Omega | FunctionKind::BigOmega => {
                PredictionInput::new(ShapeKind::OmegaMain, n, n)
            }
            FunctionKind::AlphaOmega | FunctionKind::AlphaBigOmega => {
                PredictionInput::new(ShapeKind::AlphaMain, n, n)
                    .with_r(self.alpha_r.expect("validated"))
            }
            FunctionKind::SmoothIndicator => {
                PredictionInput::new(ShapeKind::SmoothMain, n, n).with_u(self.smooth_params()?.u)
            }
            _ => PredictionInput::new(ShapeKind::D1Q2, n, n),
        };
        Ok(move |q: f64| {
            let mut input = template;
            input.q = q;
            predicted_lower_bound(&input).map_or(f64::NAN, |p| p.value)
        })
    }
}

/// A cell of a tabular report.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => String::new(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if !v.is_finite() => Value::Null,
            Cell::Num(v) => serde_json::from_str(&fmt_num(*v)).unwrap_or(Value::Null),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Generic tabular report: columns, rows and trailing `key=value` notes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableReport {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<(String, String)>,
}

impl TableReport {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        for (k, v) in &self.notes {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    obj.insert(c.to_string(), cell.json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut notes = Map::new();
        for (k, v) in &self.notes {
            notes.insert(k.clone(), json!(v));
        }
        serde_json::to_writer_pretty(&mut w, &json!({ "rows": rows, "notes": notes }))?;
        writeln!(w)?;
        Ok(())
    }
}

/// Rendered report plus the invariant verdict of the run.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub rendered: String,
    pub passed: bool,
}

impl ExperimentOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_INVARIANT
        }
    }
}

/// Runs an experiment and writes the report to `config.out` when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let outcome = render(config)?;
    if let Some(path) = &config.out {
        std::fs::write(path, &outcome.rendered)?;
    }
    Ok(outcome)
}

fn render(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let mut buf = Vec::new();
    let passed = match config.experiment {
        ExperimentKind::VarianceScaling => {
            let ctx = build_sieve(config.n)?;
            let f = config.build_table(&ctx)?;
            let report = variance_profile(&f, &config.q_grid.values(), config.predictor()?)?;
            match config.format {
                OutputFormat::Csv => report.write_csv(&mut buf)?,
                OutputFormat::Json => report.write_json(&mut buf)?,
            }
            true
        }
        kind => {
            let (table, passed) = match kind {
                ExperimentKind::L2Minor => l2_minor(config)?,
                ExperimentKind::TwistedSweep => twisted_sweep(config)?,
                ExperimentKind::SmoothCensus => smooth_census(config)?,
                ExperimentKind::CsChain => cs_chain(config)?,
                ExperimentKind::Identities => identities(config)?,
                ExperimentKind::VarianceScaling => unreachable!(),
            };
            match config.format {
                OutputFormat::Csv => table.write_csv(&mut buf)?,
                OutputFormat::Json => table.write_json(&mut buf)?,
            }
            passed
        }
    };
    Ok(ExperimentOutcome {
        rendered: String::from_utf8(buf).expect("reports are UTF-8"),
        passed,
    })
}

fn l2_minor(config: &ExperimentConfig) -> Result<(TableReport, bool)> {
    let ctx = build_sieve(config.n)?;
    let f = config.build_table(&ctx)?;
    let bump = BumpFunction::new();
    let weight = config.weight.unwrap_or(false).then_some(&bump);
    let grid = exp_sum_grid(&f, config.grid_size(), weight)?;
    let mut report = TableReport::new(&[
        "Q",
        "Q0",
        "K",
        "major",
        "minor",
        "full",
        "minor_over_Q",
        "major_measure",
        "admissible",
    ]);
    let sq = match weight {
        Some(w) => f.weighted(w).sum_of_squares(),
        None => f.sum_of_squares(),
    };
    let mut passed = true;
    for q in config.q_grid.values() {
        let q0 = config.q0_for(q);
        let arcs = build_arc_system(config.k, q0, q)?;
        let split = l2_split(&grid, &arcs);
        passed &= (split.major + split.minor - split.full).abs() <= 1e-9 * sq;
        report.rows.push(vec![
            Cell::Num(q),
            Cell::Num(q0),
            Cell::Num(config.k),
            Cell::Num(split.major),
            Cell::Num(split.minor),
            Cell::Num(split.full),
            Cell::Num(split.minor / q),
            Cell::Num(arcs.total_major_measure),
            Cell::Bool(arcs.admissible(config.n as f64)),
        ]);
    }
    passed &= (grid.mean_square() - sq).abs() <= 1e-9 * sq.max(f64::MIN_POSITIVE);
    report.note("f", config.f.name());
    report.note("N", config.n.to_string());
    report.note("M", grid.m().to_string());
    report.note("sum_f_squared", fmt_num(sq));
    Ok((report, passed))
}

fn twisted_sweep(config: &ExperimentConfig) -> Result<(TableReport, bool)> {
    let ctx = build_sieve(config.n)?;
    let f = config.build_table(&ctx)?;
    let bump = BumpFunction::new();
    let weight = config.weight.unwrap_or(false).then_some(&bump);
    let n = config.n as f64;
    let log_u = match f.kind() {
        FunctionKind::SmoothIndicator => Some(config.smooth_params()?.u.ln()),
        _ => None,
    };
    let mut report = TableReport::new(&["q", "mu_q", "twisted", "reference", "ratio"]);
    for q in config.q_grid.values() {
        let q = q.floor() as u64;
        let mu = mobius(q);
        let value = twisted_sum(&f, q, weight);
        // -mu(q) N log u
        let reference = log_u.map_or(f64::NAN, |lu| -(mu as f64) * n * lu);
        let ratio = if reference.is_nan() || reference == 0.0 {
            f64::NAN
        } else {
            value / reference
        };
        report.rows.push(vec![
            Cell::Int(q as i64),
            Cell::Int(mu),
            Cell::Num(value),
            Cell::Num(reference),
            Cell::Num(ratio),
        ]);
    }
    report.note("f", config.f.name());
    report.note("N", config.n.to_string());
    report.note("weight", if weight.is_some() { "bump" } else { "none" });
    Ok((report, true))
}

/// Default `u` values of the smooth census.
pub const CENSUS_U: [f64; 5] = [1.1, 1.3, 1.5, 1.8, 2.0];

fn smooth_census(config: &ExperimentConfig) -> Result<(TableReport, bool)> {
    let ctx = build_sieve(config.n)?;
    let n = config.n as f64;
    let us: Vec<f64> = if config.u.is_empty() {
        CENSUS_U.to_vec()
    } else {
        config.u.clone()
    };
    let mut report = TableReport::new(&["u", "y", "psi", "psi_over_N", "main_over_N", "abs_dev"]);
    for u in us {
        let params = SmoothParams::from_u(u, config.n)?;
        let psi = smooth_count(&ctx, config.n, params.y)?;
        let main = smooth_count_prediction(n, 1.0, params.y) / n;
        let ratio = psi as f64 / n;
        report.rows.push(vec![
            Cell::Num(u),
            Cell::Num(params.y),
            Cell::Int(psi as i64),
            Cell::Num(ratio),
            Cell::Num(main),
            Cell::Num((ratio - main).abs()),
        ]);
    }
    report.note("N", config.n.to_string());
    Ok((report, true))
}

fn cs_chain(config: &ExperimentConfig) -> Result<(TableReport, bool)> {
    let ctx = build_sieve(config.n)?;
    let f = config.build_table(&ctx)?;
    let bump = BumpFunction::new();
    let weight = config.weight.unwrap_or(true).then_some(&bump);
    let r_max = config
        .r
        .unwrap_or_else(|| (config.n as f64).powf(0.45).floor() as usize)
        .max(1);
    let g = |r: usize| if ctx.is_prime(r) { 1.0 } else { 0.0 };
    let mut report = TableReport::new(&["Q", "Q0", "lhs", "cross", "denom", "bound", "holds"]);
    let mut passed = true;
    for q in config.q_grid.values() {
        let q0 = config.q0_for(q);
        let arcs = build_arc_system(config.k, q0, q)?;
        let cs = cs_chain_report(&f, &ctx, r_max, g, &arcs, weight, config.grid_size())?;
        let holds = cs.slack() >= -1e-9 * cs.lhs * cs.denom;
        passed &= holds;
        report.rows.push(vec![
            Cell::Num(q),
            Cell::Num(q0),
            Cell::Num(cs.lhs),
            Cell::Num(cs.cross),
            Cell::Num(cs.denom),
            Cell::Num(cs.bound().unwrap_or(f64::NAN)),
            Cell::Bool(holds),
        ]);
    }
    report.note("f", config.f.name());
    report.note("N", config.n.to_string());
    report.note("R", r_max.to_string());
    report.note("weight", if weight.is_some() { "bump" } else { "none" });
    Ok((report, passed))
}

fn identities(config: &ExperimentConfig) -> Result<(TableReport, bool)> {
    let n = config.n;
    let ctx = build_sieve(n)?;
    let mut report = TableReport::new(&["identity", "status", "detail"]);
    let mut passed = true;
    let mut record = |name: &str, ok: bool, detail: String| {
        passed &= ok;
        report.rows.push(vec![
            Cell::Text(name.to_string()),
            Cell::Text(if ok { "PASS" } else { "FAIL" }.to_string()),
            Cell::Text(detail),
        ]);
    };

    let omega = arithmetic_table(&ctx, FunctionKind::Omega)?;
    let big_omega = arithmetic_table(&ctx, FunctionKind::BigOmega)?;
    let lhs: i64 = omega.exact_values().expect("integer table").iter().sum();
    let rhs: i64 = ctx.primes().iter().map(|&p| (n / p as usize) as i64).sum();
    record("omega_double_count", lhs == rhs, format!("{lhs} vs {rhs}"));

    let lhs: i64 = big_omega
        .exact_values()
        .expect("integer table")
        .iter()
        .sum();
    let mut rhs = 0i64;
    for &p in ctx.primes() {
        let mut pk = p as usize;
        loop {
            rhs += (n / pk) as i64;
            match pk.checked_mul(p as usize) {
                Some(next) if next <= n => pk = next,
                _ => break,
            }
        }
    }
    record(
        "big_omega_double_count",
        lhs == rhs,
        format!("{lhs} vs {rhs}"),
    );

    let mut worst: f64 = 0.0;
    for q in 1..=100u64 {
        let row = ramanujan_row(q, 100);
        for m in 1..=100u64 {
            let sieved = row[m as usize - 1];
            let closed = ramanujan_closed_form(q, m);
            let cosine = ramanujan_cosine_sum(q, m);
            worst = worst
                .max((sieved - closed).abs() as f64)
                .max((sieved as f64 - cosine).abs());
        }
    }
    record(
        "ramanujan_three_way",
        worst <= 1e-8,
        format!("max deviation {}", fmt_num(worst)),
    );

    let grid = exp_sum_grid(&omega, 2 * n, None)?;
    let sq = omega.sum_of_squares();
    let rel = (grid.mean_square() - sq).abs() / sq;
    record(
        "parseval",
        rel <= 1e-9,
        format!("relative error {}", fmt_num(rel)),
    );

    let v2 = variance(&omega, 2.0)?;
    record(
        "variance_q2_zero",
        v2 == 0.0,
        format!("V(N,2;omega) = {}", fmt_num(v2)),
    );

    let small = omega.truncated(n.min(200))?;
    let q = (small.n_max() as f64).min(50.0);
    let fast = variance(&small, q)?;
    let slow = variance_bruteforce(&small, q);
    let rel = (fast - slow).abs() / fast.abs().max(slow.abs()).max(f64::MIN_POSITIVE);
    record(
        "variance_oracle",
        rel <= 1e-9,
        format!("relative error {}", fmt_num(rel)),
    );

    let mid = omega.truncated(n.min(2000))?;
    let q = (mid.n_max() as f64).min(200.0);
    let base = variance(&mid, q)?;
    let scaled = variance(&mid.scaled(10.0), q)?;
    let rel = (scaled - 100.0 * base).abs() / (100.0 * base).max(f64::MIN_POSITIVE);
    record(
        "variance_homogeneity",
        rel <= 1e-12,
        format!("relative error {}", fmt_num(rel)),
    );

    let cap = (n as f64).ln() / std::f64::consts::LN_2;
    let max_big = big_omega.values().iter().cloned().fold(0.0, f64::max);
    record(
        "max_size_bound",
        max_big <= cap,
        format!("max Omega(n) = {max_big}, log N / log 2 = {}", fmt_num(cap)),
    );

    let mut c0_dev: f64 = 0.0;
    for variant in [PrimeCount::Omega, PrimeCount::BigOmega] {
        let params = AlphaParams {
            r: f64::INFINITY,
            alpha: 1.0,
            variant,
        };
        c0_dev = c0_dev.max((c0_constant(params, 10_000)? - 1.0).abs());
    }
    record(
        "c0_at_alpha_one",
        c0_dev <= 1e-12,
        format!("deviation {}", fmt_num(c0_dev)),
    );

    let j = BumpFunction::new().integral();
    record(
        "bump_integral",
        (0.60..=0.61).contains(&j),
        format!("J = {}", fmt_num(j)),
    );

    let env_n = n.min(10_000);
    let one = arithmetic_table(&build_sieve(env_n)?, FunctionKind::One)?;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let env_ok = (1..=1000).all(|i| {
        let theta = (i as f64 * golden).fract();
        exp_sum_point(&one, theta, None).norm() <= s1_envelope(theta, env_n) * (1.0 + 1e-12)
    });
    record("s1_envelope", env_ok, format!("1000 points at N = {env_n}"));

    report.note("N", n.to_string());
    Ok((report, passed))
}
