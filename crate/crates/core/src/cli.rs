//! Command-line front end: `classify`, `orbit-sample`, `equiv-map` and `verify`.
//!
//! Exit codes: 0 success, 1 property failure, 2 invalid input, 3 I/O failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{validate_params, FamilyDescriptor, FamilyId, FamilyParams, ParamName};
use crate::foliation::{
    canonical_target, equivalence_map, equivalence_map_inverse, topological_type,
};
use crate::lie::Covector;
use crate::orbit::{is_generic, orbit_dimension, orbit_param, ToleranceConfig};
use crate::report::fmt_f64;
use crate::verify::{run_verify, RunConfig, Scope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Property(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID_INPUT,
            CliError::Property(_) => EXIT_PROPERTY_FAILURE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "md5fol",
    version,
    about = "Coadjoint orbits and foliations of the MD5-groups G5_4_1..G5_4_14"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stratum, orbit dimension and topological type of a point.
    Classify(ClassifyArgs),
    /// Sample an orbit over an (x, a) grid.
    OrbitSample(OrbitSampleArgs),
    /// Apply the equivalence map onto the canonical foliation (or its inverse).
    EquivMap(EquivMapArgs),
    /// Run the randomized certification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family tag, G5_4_1 .. G5_4_14.
    #[arg(long)]
    pub family: String,
    /// Comma-separated name=value pairs, e.g. lambda1=2,lambda2=3,lambda3=-1.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub params: String,
    /// Five comma-separated reals (α, β, γ, δ, σ).
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub tol_rank: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_membership: f64,
}

impl ToleranceArgs {
    fn config(&self) -> Result<ToleranceConfig, CliError> {
        ToleranceConfig::new(self.tol_rank, self.tol_residual, self.tol_membership)
            .map_err(|e| CliError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OrbitSampleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Closed interval for x as "lo,hi".
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub x_range: String,
    #[arg(long, default_value_t = 1)]
    pub x_count: usize,
    /// Closed interval for a as "lo,hi".
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub a_range: String,
    #[arg(long, default_value_t = 21)]
    pub a_count: usize,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivMapArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub inverse: bool,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// "all" or a family tag.
    #[arg(long, default_value = "all")]
    pub scope: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub n_samples: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

pub fn parse_params(id: FamilyId, text: &str) -> Result<FamilyDescriptor, CliError> {
    let mut params = FamilyParams::none();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("parameter {pair:?} is not name=value")))?;
        let name = ParamName::parse(name.trim())
            .ok_or_else(|| CliError::Invalid(format!("unknown parameter {:?}", name.trim())))?;
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Invalid(format!("{} is not a number: {value:?}", name.as_str()))
        })?;
        params.set(name, value);
    }
    validate_params(id, params).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn parse_family(args: &FamilyArgs) -> Result<FamilyDescriptor, CliError> {
    let id: FamilyId = args
        .family
        .parse()
        .map_err(|e: crate::catalog::CatalogError| CliError::Invalid(e.to_string()))?;
    parse_params(id, &args.params)
}

fn parse_reals(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Invalid(format!("{what}: {v:?} is not a finite real")))
        })
        .collect()
}

pub fn parse_point(text: &str) -> Result<Covector, CliError> {
    let v = parse_reals(text, "point")?;
    let c: [f64; 5] = v.try_into().map_err(|v: Vec<f64>| {
        CliError::Invalid(format!("point needs 5 coordinates, got {}", v.len()))
    })?;
    Ok(Covector(c))
}

fn parse_range(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    match parse_reals(text, what)?.as_slice() {
        [lo, hi] if lo <= hi => Ok((*lo, *hi)),
        _ => Err(CliError::Invalid(format!(
            "{what} must be \"lo,hi\" with lo <= hi"
        ))),
    }
}

/// `count` evenly spaced values over `[lo, hi]`; a single value sits at `lo`.
pub fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "fixed")]
    Fixed,
    #[serde(rename = "generic")]
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub stratum: Stratum,
    pub orbit_dim: usize,
    pub top_type: String,
    pub canonical_target: String,
}

pub fn classify(
    d: &FamilyDescriptor,
    f: &Covector,
    tol: &ToleranceConfig,
) -> Result<Classification, CliError> {
    let orbit_dim = orbit_dimension(d, f, tol).map_err(|e| CliError::Property(e.to_string()))?;
    let t = topological_type(d.id());
    Ok(Classification {
        stratum: if is_generic(f) {
            Stratum::Generic
        } else {
            Stratum::Fixed
        },
        orbit_dim,
        top_type: t.to_string(),
        canonical_target: canonical_target(t).family.id().to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSampleRow {
    pub x: f64,
    pub a: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub f5: f64,
}

impl OrbitSampleRow {
    pub fn new(x: f64, a: f64, p: &Covector) -> Self {
        let [f1, f2, f3, f4, f5] = p.0;
        Self {
            x,
            a,
            f1,
            f2,
            f3,
            f4,
            f5,
        }
    }

    pub fn point(&self) -> Covector {
        Covector([self.f1, self.f2, self.f3, self.f4, self.f5])
    }

    fn values(&self) -> [f64; 7] {
        [self.x, self.a, self.f1, self.f2, self.f3, self.f4, self.f5]
    }
}

pub const CSV_HEADER: &str = "x,a,f1,f2,f3,f4,f5";

/// Rows over the grid, x-major. A point off the generic stratum yields the
/// single row `(α, 0)` since its orbit is the point itself.
pub fn orbit_sample_rows(
    d: &FamilyDescriptor,
    f: &Covector,
    xs: &[f64],
    as_: &[f64],
) -> Vec<OrbitSampleRow> {
    if !is_generic(f) {
        return vec![OrbitSampleRow::new(f.alpha(), 0.0, f)];
    }
    xs.iter()
        .flat_map(|&x| {
            as_.iter()
                .map(move |&a| OrbitSampleRow::new(x, a, &orbit_param(d, f, x, a)))
        })
        .collect()
}

pub fn render_rows(rows: &[OrbitSampleRow], format: DataFormat) -> String {
    let mut s = String::new();
    if format == DataFormat::Csv {
        s.push_str(CSV_HEADER);
        s.push('\n');
    }
    for r in rows {
        let v = r.values().map(fmt_f64);
        match format {
            DataFormat::Csv => s.push_str(&v.join(",")),
            DataFormat::Json => {
                let fields: Vec<String> = CSV_HEADER
                    .split(',')
                    .zip(&v)
                    .map(|(k, v)| format!("\"{k}\":{v}"))
                    .collect();
                s.push('{');
                s.push_str(&fields.join(","));
                s.push('}');
            }
        }
        s.push('\n');
    }
    s
}

fn render_point(p: &Covector, format: DataFormat) -> String {
    let v = p.0.map(fmt_f64);
    match format {
        DataFormat::Csv => format!("{}\n", v.join(",")),
        DataFormat::Json => format!("[{}]\n", v.join(",")),
    }
}

fn io_err(what: &str, e: io::Error) -> CliError {
    CliError::Io(format!("{what}: {e}"))
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut file = File::create(p).map_err(|e| io_err(&p.display().to_string(), e))?;
            file.write_all(text.as_bytes())
                .map_err(|e| io_err(&p.display().to_string(), e))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_err("stdout", e)),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Classify(args) => {
            let d = parse_family(&args.family)?;
            let f = parse_point(&args.family.point)?;
            let record = classify(&d, &f, &args.tolerances.config()?)?;
            let line = serde_json::to_string(&record).expect("record serializes");
            emit(&format!("{line}\n"), None, out)?;
            Ok(EXIT_OK)
        }
        Command::OrbitSample(args) => {
            let d = parse_family(&args.family)?;
            let f = parse_point(&args.family.point)?;
            if args.x_count == 0 || args.a_count == 0 {
                return Err(CliError::Invalid("grid counts must be at least 1".into()));
            }
            let (x0, x1) = parse_range(&args.x_range, "x-range")?;
            let (a0, a1) = parse_range(&args.a_range, "a-range")?;
            if !is_generic(&f) {
                let _ = writeln!(
                    err,
                    "warning: point is a fixed point; emitting the single row (x=alpha, a=0)"
                );
            }
            let rows = orbit_sample_rows(
                &d,
                &f,
                &grid(x0, x1, args.x_count),
                &grid(a0, a1, args.a_count),
            );
            emit(&render_rows(&rows, args.format), args.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::EquivMap(args) => {
            let d = parse_family(&args.family)?;
            let f = parse_point(&args.family.point)?;
            let image = if args.inverse {
                equivalence_map_inverse(&d, &f)
            } else {
                equivalence_map(&d, &f)
            };
            emit(&render_point(&image, args.format), None, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let scope: Scope = args
                .scope
                .parse()
                .map_err(|e: crate::catalog::CatalogError| {
                    CliError::Invalid(format!("invalid scope: {e}"))
                })?;
            if args.n_samples == 0 {
                return Err(CliError::Invalid("n-samples must be at least 1".into()));
            }
            let config = RunConfig {
                seed: args.seed,
                n_samples: args.n_samples,
                tolerances: args.tolerances.config()?,
            };
            let report = run_verify(scope, &config);
            let text = match args.format {
                ReportFormat::Text => report.render_text(),
                ReportFormat::Json => report.render_json(),
                ReportFormat::Csv => report.render_csv(),
            };
            emit(&text, args.out.as_ref(), out)?;
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            })
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}
