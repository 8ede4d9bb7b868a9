//! Command line front end: argument parsing, dispatch and output formats.
//!
//! Every command renders its whole output in memory and then writes it in
//! one step, either to stdout or atomically to `--output` (temporary file in
//! the same directory, then rename). Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | invalid configuration |
//! | 3 | numerical failure |
//! | 4 | a verification check was falsified |

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cheb::GridSpec;
use crate::checks::{self, CheckOutcome};
use crate::degree::{self, DegreeFamily};
use crate::lab::{self, ConvergenceReport, PreparedSweep};
use crate::Error;

pub const CSV_HEADER: &str = "family,n,dof,max_error,l2_error";

#[derive(Parser, Debug)]
#[command(
    name = "chebdeg",
    version,
    about = "Chebyshev approximation in the hypercube under total, Euclidean and max degree"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; defaults to csv for sweep and count, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convergence sweep of truncated Chebyshev expansions.
    Sweep(SweepArgs),
    /// Size of the index set {k : degree(k) <= n}.
    Count(CountArgs),
    /// Asymptotic degrees-of-freedom ratios relative to Euclidean degree.
    Ratio(RatioArgs),
    /// Randomized checks of the Bernstein and Newton ellipse geometry.
    RegionsCheck(CheckArgs),
    /// Checks of the inequalities and identities behind the decay bound.
    LemmaCheck(CheckArgs),
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Test function: runge-f or runge-g.
    #[arg(long, default_value = "runge-f")]
    pub function: String,
    /// Dimension s (at most 3).
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    /// total, euclidean, max or all.
    #[arg(long, default_value = "all")]
    pub family: String,
    /// Degrees as lo:hi:step, lo:hi or a single value.
    #[arg(long, default_value = "2:30:2")]
    pub n: String,
    /// Per-axis degree of the base interpolant.
    #[arg(long = "base-n", default_value_t = 48)]
    pub base_n: usize,
    /// Evaluation grid as cheb:M (M second-kind points per axis) or random:M.
    #[arg(long = "eval-grid", default_value = "cheb:201")]
    pub eval_grid: String,
    /// Seed for random evaluation grids.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degree window for the rate fit, lo:hi.
    #[arg(long = "fit-window", default_value = "8:24")]
    pub fit_window: String,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub dims: usize,
    /// total, euclidean, max or all.
    #[arg(long, default_value = "all")]
    pub family: String,
    /// Degree bounds as lo:hi:step, lo:hi or a single value.
    #[arg(long)]
    pub n: String,
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    #[arg(long)]
    pub dims: usize,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = checks::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Sweep,
    Count,
    Ratio,
    RegionsCheck,
    LemmaCheck,
}

/// Inclusive arithmetic progression `lo, lo+step, …, ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
    pub step: usize,
}

impl NRange {
    pub fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi).step_by(self.step).collect()
    }
}

impl FromStr for NRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad degree range '{s}'")))
        };
        let (lo, hi, step) = match parts.as_slice() {
            [n] => (num(n)?, num(n)?, 1),
            [lo, hi] => (num(lo)?, num(hi)?, 1),
            [lo, hi, step] => (num(lo)?, num(hi)?, num(step)?),
            _ => return Err(Error::invalid(format!("bad degree range '{s}'"))),
        };
        if step == 0 || lo > hi {
            return Err(Error::invalid(format!("degree range '{s}' is empty")));
        }
        Ok(NRange { lo, hi, step })
    }
}

fn parse_families(s: &str) -> Result<Vec<DegreeFamily>, Error> {
    if s.eq_ignore_ascii_case("all") {
        Ok(DegreeFamily::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

fn parse_grid(s: &str, seed: u64) -> Result<GridSpec, Error> {
    let bad = || Error::invalid(format!("bad grid '{s}', expected cheb:M or random:M"));
    let (kind, m) = s.split_once(':').ok_or_else(bad)?;
    let m: usize = m.parse().map_err(|_| bad())?;
    match kind {
        "cheb" | "chebyshev" => Ok(GridSpec::chebyshev(m)),
        "random" | "uniform" => Ok(GridSpec::uniform_random(m, seed)),
        _ => Err(bad()),
    }
}

fn parse_window(s: &str) -> Result<(usize, usize), Error> {
    let r: NRange = s.parse()?;
    Ok((r.lo, r.hi))
}

/// Fully validated configuration for one invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub dims: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<DegreeFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<NRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<(usize, usize)>,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Error> {
        let mut cfg = match cli.command {
            Command::Sweep(a) => {
                let n_range: NRange = a.n.parse()?;
                let base_n = a.base_n;
                let fit_window = parse_window(&a.fit_window)?;
                // same guard the sweep applies: degrees inside the fit window need 2n <= base_n
                let fitted_max = n_range
                    .values()
                    .into_iter()
                    .filter(|&n| n >= fit_window.0 && n <= fit_window.1)
                    .max();
                if n_range.hi > base_n || fitted_max.is_some_and(|n| 2 * n > base_n) {
                    return Err(Error::invalid(format!(
                        "base-n {base_n} too small for degrees {}..={} with fit window {fit_window:?}",
                        n_range.lo, n_range.hi
                    )));
                }
                lab::test_function(&a.function, a.dims)?;
                RunConfig {
                    command: CommandKind::Sweep,
                    function: Some(a.function),
                    dims: Some(a.dims),
                    families: parse_families(&a.family)?,
                    n_range: Some(n_range),
                    base_n: Some(base_n),
                    eval_grid: Some(parse_grid(&a.eval_grid, a.seed)?),
                    fit_window: Some(fit_window),
                    seed: a.seed,
                    format: Format::Csv,
                    output: None,
                }
            }
            Command::Count(a) => RunConfig {
                command: CommandKind::Count,
                function: None,
                dims: Some(a.dims),
                families: parse_families(&a.family)?,
                n_range: Some(a.n.parse()?),
                base_n: None,
                eval_grid: None,
                fit_window: None,
                seed: 0,
                format: Format::Csv,
                output: None,
            },
            Command::Ratio(a) => RunConfig {
                command: CommandKind::Ratio,
                function: None,
                dims: Some(a.dims),
                families: vec![DegreeFamily::Total, DegreeFamily::Max],
                n_range: None,
                base_n: None,
                eval_grid: None,
                fit_window: None,
                seed: 0,
                format: Format::Json,
                output: None,
            },
            Command::RegionsCheck(a) => check_config(CommandKind::RegionsCheck, a.seed),
            Command::LemmaCheck(a) => check_config(CommandKind::LemmaCheck, a.seed),
        };
        if let Some(d) = cfg.dims {
            if d == 0 {
                return Err(Error::invalid("dims must be at least 1"));
            }
        }
        if let Some(f) = cli.format {
            cfg.format = f;
        }
        cfg.output = cli.output;
        Ok(cfg)
    }
}

fn check_config(command: CommandKind, seed: u64) -> RunConfig {
    RunConfig {
        command,
        function: None,
        dims: None,
        families: Vec::new(),
        n_range: None,
        base_n: None,
        eval_grid: None,
        fit_window: None,
        seed,
        format: Format::Json,
        output: None,
    }
}

/// Failure of one invocation, with its exit code.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
    Falsified { message: String, output: String },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Falsified { .. } => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "invalid-config",
            RunError::Numerical(_) => "numerical-failure",
            RunError::Falsified { .. } => "check-falsified",
        }
    }

    fn message(&self) -> &str {
        match self {
            RunError::Config(m) | RunError::Numerical(m) => m,
            RunError::Falsified { message, .. } => message,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        json!({ "error": self.kind(), "exit_code": self.exit_code(), "message": self.message() }).to_string()
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Aliasing { .. } | Error::CapExceeded { .. } | Error::Precondition(_) => {
                RunError::Config(e.to_string())
            }
            Error::Falsified(m) => RunError::Falsified {
                message: m,
                output: String::new(),
            },
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders the output of `config` without writing it anywhere.
pub fn run(config: &RunConfig) -> Result<String, RunError> {
    match config.command {
        CommandKind::Sweep => run_sweep(config),
        CommandKind::Count => run_count(config),
        CommandKind::Ratio => run_ratio(config),
        CommandKind::RegionsCheck => run_checks(config, checks::regions_suite(config.seed)),
        CommandKind::LemmaCheck => run_checks(config, checks::lemma_suite(config.seed)),
    }
}

fn missing(what: &str) -> RunError {
    RunError::Config(format!("missing {what}"))
}

/// Reports for each family of the config, transforming the target once.
pub fn sweep_reports(config: &RunConfig) -> Result<Vec<ConvergenceReport>, RunError> {
    let name = config.function.as_deref().ok_or_else(|| missing("function"))?;
    let dims = config.dims.ok_or_else(|| missing("dims"))?;
    let n_values = config.n_range.ok_or_else(|| missing("degree range"))?.values();
    let base_n = config.base_n.ok_or_else(|| missing("base-n"))?;
    let grid = config.eval_grid.ok_or_else(|| missing("eval grid"))?;
    let window = config.fit_window.unwrap_or(lab::DEFAULT_FIT_WINDOW);
    let tf = lab::test_function(name, dims)?;
    let prepared = PreparedSweep::new(&tf, base_n, &grid)?;
    let reports = config
        .families
        .iter()
        .map(|&family| prepared.report(family, &n_values, window))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reports)
}

/// CSV rows ordered by `n`, then by family, so `--family all` interleaves
/// the curves.
pub fn sweep_csv(reports: &[ConvergenceReport]) -> String {
    let mut rows: Vec<(usize, usize, String)> = Vec::new();
    for (fi, rep) in reports.iter().enumerate() {
        for r in &rep.records {
            rows.push((
                r.n,
                fi,
                format!(
                    "{},{},{},{},{}",
                    rep.family,
                    r.n,
                    r.dof,
                    fmt_float(r.max_error),
                    fmt_float(r.grid_l2_error)
                ),
            ));
        }
    }
    rows.sort_by_key(|(n, fi, _)| (*n, *fi));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (_, _, line) in rows {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn run_sweep(config: &RunConfig) -> Result<String, RunError> {
    let reports = sweep_reports(config)?;
    match config.format {
        Format::Csv => Ok(sweep_csv(&reports)),
        Format::Json => {
            let mut records = Vec::new();
            let mut fitted = serde_json::Map::new();
            let mut theory = serde_json::Map::new();
            for rep in &reports {
                for r in &rep.records {
                    records.push(json!({
                        "family": rep.family,
                        "n": r.n,
                        "dof": r.dof,
                        "max_error": r.max_error,
                        "l2_error": r.grid_l2_error,
                    }));
                }
                fitted.insert(rep.family.to_string(), json!(rep.fitted_rate));
                theory.insert(rep.family.to_string(), json!(rep.theoretical_rate));
            }
            let doc = json!({
                "config": config,
                "records": records,
                "fitted_rate": fitted,
                "theoretical_rate": theory,
            });
            Ok(pretty(&doc))
        }
    }
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values serialize");
    s.push('\n');
    s
}

fn run_count(config: &RunConfig) -> Result<String, RunError> {
    let dims = config.dims.ok_or_else(|| missing("dims"))?;
    let ns = config.n_range.ok_or_else(|| missing("degree range"))?.values();
    let mut rows = Vec::new();
    for &n in &ns {
        for &family in &config.families {
            rows.push((family, n, degree::count_index_set(dims, n as f64, family)?));
        }
    }
    Ok(match config.format {
        Format::Csv => {
            let mut out = String::from("family,n,count\n");
            for (family, n, count) in rows {
                let _ = writeln!(out, "{family},{n},{count}");
            }
            out
        }
        Format::Json => {
            let counts: Vec<_> = rows
                .iter()
                .map(|(family, n, count)| json!({ "family": family, "n": n, "count": count }))
                .collect();
            pretty(&json!({ "config": config, "counts": counts }))
        }
    })
}

fn run_ratio(config: &RunConfig) -> Result<String, RunError> {
    let dims = config.dims.ok_or_else(|| missing("dims"))?;
    let total = degree::dof_ratio(dims, DegreeFamily::Total)?;
    let max = degree::dof_ratio(dims, DegreeFamily::Max)?;
    Ok(match config.format {
        Format::Json => pretty(&json!({ "total": total, "max": max })),
        Format::Csv => format!("family,ratio\ntotal,{}\nmax,{}\n", fmt_float(total), fmt_float(max)),
    })
}

fn run_checks(config: &RunConfig, outcomes: Vec<CheckOutcome>) -> Result<String, RunError> {
    let passed = outcomes.iter().all(CheckOutcome::passed);
    let text = match config.format {
        Format::Json => pretty(&json!({ "seed": config.seed, "passed": passed, "checks": outcomes })),
        Format::Csv => {
            let mut out = String::from("check,samples,skipped,failures,worst,tolerance,passed\n");
            for o in &outcomes {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    o.name,
                    o.samples,
                    o.skipped,
                    o.failures,
                    fmt_float(o.worst),
                    fmt_float(o.tolerance),
                    o.passed()
                );
            }
            out
        }
    };
    if passed {
        Ok(text)
    } else {
        let names: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
        Err(RunError::Falsified {
            message: format!("failed checks: {}", names.join(", ")),
            output: text,
        })
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(config: &RunConfig, text: &str) -> Result<(), RunError> {
    match &config.output {
        Some(path) => {
            write_atomic(path, text).map_err(|e| RunError::Numerical(format!("writing {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| RunError::Numerical(format!("writing stdout: {e}")))
        }
    }
}

/// Runs a validated configuration, writes its output and returns the exit code.
pub fn execute(config: &RunConfig) -> ExitCode {
    let result = run(config).and_then(|text| emit(config, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let RunError::Falsified { output, .. } = &err {
                if !output.is_empty() {
                    let _ = emit(config, output);
                }
            }
            eprintln!("{}", err.record());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code != 0 {
                eprintln!("{}", RunError::Config(e.kind().to_string()).record());
                return ExitCode::from(2);
            }
            return ExitCode::SUCCESS;
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(config) => execute(&config),
        Err(e) => {
            let err = RunError::Config(e.to_string());
            eprintln!("{}", err.record());
            ExitCode::from(err.exit_code())
        }
    }
}
