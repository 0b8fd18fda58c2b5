//! `fif` command-line front end.
//!
//! Every subcommand resolves a [`RunConfig`] from built-in defaults, an
//! optional JSON file (`--config`, either a bare config object or a
//! `meta.json` with a `config` key) and command-line flags, in that order.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{
    default_box_scales, dimension_report, error_bound_alpha, error_bound_discrete, holder_seminorm,
    modulus_of_continuity, sup_norm_diff, HolderParams,
};
use crate::error::FifError;
use crate::fif_core::{
    solve, FifProblem, FifResult, Partition, Scaling, ScalingVector, SolveOptions,
};
use crate::kernel::{KernelFamily, SigmoidalKernel};
use crate::nn_operator::{FunctionInput, NnOperator, NodeTable, OperatorConfig, RealFn};
use crate::sampled::{grid_point, SampledFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_CROSS_CHECK: i32 = 4;

/// Largest |estimated − theoretical| accepted by `fif dimension`.
pub const DIMENSION_TOLERANCE: f64 = 0.15;

const KNOT_GRID_TOLERANCE: f64 = 1e-9;
const WEIER_TERMS: i32 = 12;

#[derive(Debug, Parser)]
#[command(
    name = "fif",
    version,
    about = "Neural-network α-fractal interpolation functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render one fractal function: fif.csv and meta.json.
    Build(ConfigLayer),
    /// Sup-error ladder over n (and N with --discrete): converge.csv.
    Converge(ConfigLayer),
    /// Box dimension, closed form against box counting: dimension.json.
    Dimension(ConfigLayer),
    /// C^r fractal function and its derivatives: smooth.csv and meta.json.
    Smooth(ConfigLayer),
    /// Hölder-norm error ladder under variable scalings: holder.csv.
    Holder(ConfigLayer),
    /// Uniform error bounds without solving: bounds.csv.
    Bounds(ConfigLayer),
}

impl Command {
    fn parts(&self) -> (CommandKind, &ConfigLayer) {
        match self {
            Command::Build(c) => (CommandKind::Build, c),
            Command::Converge(c) => (CommandKind::Converge, c),
            Command::Dimension(c) => (CommandKind::Dimension, c),
            Command::Smooth(c) => (CommandKind::Smooth, c),
            Command::Holder(c) => (CommandKind::Holder, c),
            Command::Bounds(c) => (CommandKind::Bounds, c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Build,
    Converge,
    Dimension,
    Smooth,
    Holder,
    Bounds,
}

/// Partially specified configuration: one layer of flags or file values.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigLayer {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// sin, cos, exp, poly(c0,c1,..), abspow(c,mu), weier or table:<path>.
    #[arg(long)]
    function: Option<String>,
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["A", "B"])]
    interval: Option<Vec<f64>>,
    /// Number of subintervals of the partition.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    big_n: Option<usize>,
    /// Number of operator subintervals.
    #[arg(long)]
    n: Option<usize>,
    /// Derivative order of the smooth construction.
    #[arg(long)]
    r: Option<usize>,
    /// Comma-separated constants, or wave:<amp> / tilt:<amp>.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// ramp, smoothstep<k> or smooth_bump.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    m: Option<f64>,
    /// Render on at least 2^grid_exp cells.
    #[arg(long)]
    grid_exp: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use node data only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    discrete: Option<bool>,
    #[arg(long, value_delimiter = ',')]
    n_ladder: Option<Vec<usize>>,
    #[arg(long = "N-ladder", value_delimiter = ',')]
    #[serde(rename = "N_ladder")]
    big_n_ladder: Option<Vec<usize>>,
    #[arg(long)]
    mu: Option<f64>,
}

/// Fully resolved run configuration, echoed into every JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub function: String,
    pub interval: [f64; 2],
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: usize,
    pub r: usize,
    pub alpha: String,
    pub kernel: String,
    pub m: f64,
    pub grid_exp: u32,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub discrete: bool,
    pub n_ladder: Vec<usize>,
    #[serde(rename = "N_ladder")]
    pub big_n_ladder: Vec<usize>,
    pub mu: f64,
}

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    NonConvergence(String),
    CrossCheck(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::CrossCheck(_) => EXIT_CROSS_CHECK,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::NonConvergence(m) => write!(f, "{m}"),
            CliError::CrossCheck(m) => write!(f, "cross-check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<FifError> for CliError {
    fn from(e: FifError) -> Self {
        match e {
            FifError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn located(source: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{source}: {e}"))
}

/// Runs `fif` with the given argument list (first item is the program name)
/// and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = std::env::var("FIF_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0);
    let outcome = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Config(format!("FIF_THREADS: {e}"))),
        },
        None => execute(&cli),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("fif: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let (kind, flags) = cli.command.parts();
    let cfg = resolve(kind, flags)?;
    fs::create_dir_all(&cfg.out)?;
    match kind {
        CommandKind::Build => cmd_build(&cfg),
        CommandKind::Converge => cmd_converge(&cfg),
        CommandKind::Dimension => cmd_dimension(&cfg),
        CommandKind::Smooth => cmd_smooth(&cfg),
        CommandKind::Holder => cmd_holder(&cfg),
        CommandKind::Bounds => cmd_bounds(&cfg),
    }
}

fn load_layer(path: &Path) -> CliResult<ConfigLayer> {
    let source = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| located(&source, e))?;
    if let Some(inner) = value.get("config") {
        value = inner.clone();
    }
    if let Value::Object(map) = &mut value {
        map.remove("command");
    }
    serde_json::from_value(value).map_err(|e| located(&source, e))
}

fn resolve(kind: CommandKind, flags: &ConfigLayer) -> CliResult<RunConfig> {
    let file = match &flags.config {
        Some(p) => load_layer(p)?,
        None => ConfigLayer::default(),
    };
    macro_rules! pick {
        ($field:ident, $default:expr) => {
            flags
                .$field
                .clone()
                .or_else(|| file.$field.clone())
                .unwrap_or_else(|| $default)
        };
    }
    let r = pick!(r, if kind == CommandKind::Smooth { 1 } else { 0 });
    let n_ladder = pick!(n_ladder, vec![8, 16, 32, 64]);
    let cfg = RunConfig {
        command: kind,
        function: pick!(function, "sin".into()),
        interval: {
            let v = pick!(interval, vec![0.0, 1.0]);
            if v.len() != 2 {
                return Err(located("--interval", "expects two values a b"));
            }
            [v[0], v[1]]
        },
        big_n: pick!(big_n, 4),
        n: pick!(n, 32),
        r,
        alpha: pick!(alpha, "0.3".into()),
        kernel: pick!(
            kernel,
            if kind == CommandKind::Smooth {
                format!("smoothstep{}", r.max(1))
            } else {
                "ramp".into()
            }
        ),
        m: pick!(m, 0.5),
        grid_exp: pick!(
            grid_exp,
            if kind == CommandKind::Dimension {
                18
            } else {
                14
            }
        ),
        tol: pick!(tol, 1e-10),
        max_iters: pick!(max_iters, 200),
        seed: pick!(seed, 0),
        out: pick!(out, PathBuf::from(".")),
        discrete: pick!(discrete, false),
        big_n_ladder: pick!(big_n_ladder, n_ladder.clone()),
        n_ladder,
        mu: pick!(mu, 0.5),
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    let [a, b] = cfg.interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(located(
            "--interval",
            format!("need finite a < b, got {a} {b}"),
        ));
    }
    if cfg.big_n < 2 {
        return Err(located("--N", "need N ≥ 2"));
    }
    if cfg.n == 0 {
        return Err(located("--n", "need n ≥ 1"));
    }
    if !(cfg.tol > 0.0) {
        return Err(located("--tol", "must be positive"));
    }
    if cfg.max_iters == 0 {
        return Err(located("--max-iters", "must be positive"));
    }
    if !(8..=24).contains(&cfg.grid_exp) {
        return Err(located("--grid-exp", "must lie in 8..=24"));
    }
    if cfg.n_ladder.is_empty() || cfg.n_ladder.contains(&0) {
        return Err(located("--n-ladder", "needs positive entries"));
    }
    if cfg.big_n_ladder.is_empty() || cfg.big_n_ladder.iter().any(|&v| v < 2) {
        return Err(located("--N-ladder", "needs entries ≥ 2"));
    }
    if !(cfg.mu > 0.0 && cfg.mu <= 1.0) {
        return Err(located("--mu", "must lie in (0, 1]"));
    }
    parse_kernel(&cfg.kernel, cfg.m)?;
    parse_function(&cfg.function)?;
    scaling_for(cfg, cfg.big_n)?;
    Ok(())
}

fn parse_kernel(spec: &str, m: f64) -> CliResult<SigmoidalKernel> {
    let s = spec.trim().to_ascii_lowercase();
    let family = match s.as_str() {
        "ramp" => KernelFamily::Ramp,
        "smooth_bump" | "bump" => KernelFamily::SmoothBump,
        _ => {
            let order = s
                .strip_prefix("smoothstep")
                .map(|k| k.trim_matches(|c| c == '(' || c == ')'))
                .map(|k| {
                    if k.is_empty() {
                        Ok(1)
                    } else {
                        k.parse::<usize>()
                    }
                })
                .ok_or_else(|| located("--kernel", format!("unknown kernel {spec:?}")))?
                .map_err(|e| located("--kernel", e))?;
            KernelFamily::Smoothstep(order)
        }
    };
    SigmoidalKernel::new(family, m).map_err(|e| located("--kernel", e))
}

/// Registry of seed functions.
#[derive(Debug, Clone, PartialEq)]
enum FunctionSpec {
    Sin,
    Cos,
    Exp,
    Poly(Vec<f64>),
    AbsPow { c: f64, mu: f64 },
    Weier,
    Table(PathBuf),
}

fn call_args(spec: &str, name: &str) -> CliResult<Option<Vec<f64>>> {
    let Some(rest) = spec.strip_prefix(name) else {
        return Ok(None);
    };
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| located("--function", format!("expected {name}(...), got {spec:?}")))?;
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| located("--function", format!("{t:?}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

fn parse_function(spec: &str) -> CliResult<FunctionSpec> {
    let s = spec.trim();
    if let Some(path) = s.strip_prefix("table:") {
        return Ok(FunctionSpec::Table(PathBuf::from(path)));
    }
    match s {
        "sin" => return Ok(FunctionSpec::Sin),
        "cos" => return Ok(FunctionSpec::Cos),
        "exp" => return Ok(FunctionSpec::Exp),
        "weier" => return Ok(FunctionSpec::Weier),
        _ => {}
    }
    if let Some(c) = call_args(s, "poly")? {
        return Ok(FunctionSpec::Poly(c));
    }
    if let Some(v) = call_args(s, "abspow")? {
        if v.len() != 2 || !(v[1] > 0.0) {
            return Err(located("--function", "abspow(c, mu) needs mu > 0"));
        }
        return Ok(FunctionSpec::AbsPow { c: v[0], mu: v[1] });
    }
    Err(located("--function", format!("unknown function {spec:?}")))
}

fn poly_derivative(coeffs: &[f64], order: usize) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(j, c)| c * ((j - order + 1)..=j).map(|t| t as f64).product::<f64>())
        .collect()
}

fn horner(coeffs: Vec<f64>) -> RealFn {
    Arc::new(move |x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
}

impl FunctionSpec {
    /// f together with derivative callables up to `order`, when closed forms exist.
    fn analytic(&self, order: usize) -> Option<(RealFn, Vec<RealFn>)> {
        let shifted = |base: fn(f64) -> f64, k: usize| -> RealFn {
            let shift = k as f64 * std::f64::consts::FRAC_PI_2;
            Arc::new(move |x| base(x + shift))
        };
        Some(match self {
            FunctionSpec::Sin => (
                shifted(f64::sin, 0),
                (1..=order).map(|k| shifted(f64::sin, k)).collect(),
            ),
            FunctionSpec::Cos => (
                shifted(f64::cos, 0),
                (1..=order).map(|k| shifted(f64::cos, k)).collect(),
            ),
            FunctionSpec::Exp => {
                let e: RealFn = Arc::new(f64::exp);
                (e.clone(), vec![e; order])
            }
            FunctionSpec::Poly(c) => (
                horner(c.clone()),
                (1..=order).map(|k| horner(poly_derivative(c, k))).collect(),
            ),
            FunctionSpec::AbsPow { c, mu } => {
                let (c, mu) = (*c, *mu);
                (Arc::new(move |x: f64| (x - c).abs().powf(mu)), Vec::new())
            }
            FunctionSpec::Weier => (
                Arc::new(|x: f64| {
                    (0..WEIER_TERMS)
                        .map(|k| 0.5f64.powi(k) * (3f64.powi(k) * std::f64::consts::PI * x).cos())
                        .sum()
                }),
                Vec::new(),
            ),
            FunctionSpec::Table(_) => return None,
        })
    }

    fn input(&self, cfg: &RunConfig, intervals: usize, order: usize) -> CliResult<FunctionInput> {
        match self {
            FunctionSpec::Table(path) => read_table(path, cfg.interval, intervals),
            _ => {
                let (f, derivatives) = self.analytic(order).expect("analytic spec");
                Ok(FunctionInput::with_derivatives(f, derivatives))
            }
        }
    }
}

/// Two-column (x, f(x)) CSV whose x values lie on the uniform knot grid.
fn read_table(path: &Path, interval: [f64; 2], intervals: usize) -> CliResult<FunctionInput> {
    let source = format!("table:{}", path.display());
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    let [a, b] = interval;
    let tol = KNOT_GRID_TOLERANCE * (b - a);
    let mut values: Vec<Option<f64>> = vec![None; intervals + 1];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| located(&source, e))?;
        let fields: Vec<&str> = record.iter().collect();
        let parsed: Option<(f64, f64)> = match fields.as_slice() {
            [x, y] => x.parse().ok().zip(y.parse().ok()),
            _ => None,
        };
        let Some((x, y)) = parsed else {
            if line == 0 {
                continue;
            }
            return Err(located(
                &source,
                format!("line {}: expected two numbers", line + 1),
            ));
        };
        let k = ((x - a) / (b - a) * intervals as f64).round();
        if !(0.0..=intervals as f64).contains(&k)
            || (grid_point(a, b, intervals, k as usize) - x).abs() > tol
        {
            return Err(located(
                &source,
                format!(
                    "line {}: x = {x} is not on the knot grid of N = {intervals}",
                    line + 1
                ),
            ));
        }
        values[k as usize] = Some(y);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| located(&source, format!("missing knot x_{k}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(FunctionInput::tabulated(NodeTable::uniform(a, b, values)?))
}

fn scaling_for(cfg: &RunConfig, intervals: usize) -> CliResult<ScalingVector> {
    let [a, b] = cfg.interval;
    let spec = cfg.alpha.trim();
    let family = |name: &str| spec.strip_prefix(name).and_then(|r| r.strip_prefix(':'));
    let amp = |v: &str| v.trim().parse::<f64>().map_err(|e| located("--alpha", e));
    let entries = if let Some(v) = family("wave") {
        let amp = amp(v)?;
        // α_i(x) = amp · sin(π (x − a)/(b − a))
        vec![
            Scaling::function(move |x| amp * (std::f64::consts::PI * (x - a) / (b - a)).sin());
            intervals
        ]
    } else if let Some(v) = family("tilt") {
        let amp = amp(v)?;
        // α_i(x) = amp · (x − a)/(b − a)
        vec![Scaling::function(move |x| amp * (x - a) / (b - a)); intervals]
    } else {
        let values = spec.split(',').map(amp).collect::<CliResult<Vec<f64>>>()?;
        let values = match values.len() {
            1 => vec![values[0]; intervals],
            len if len == intervals => values,
            len => {
                return Err(located(
                    "--alpha",
                    format!("{len} scalings given for N = {intervals} subintervals"),
                ))
            }
        };
        values.into_iter().map(Scaling::Constant).collect()
    };
    ScalingVector::new(entries, a, b).map_err(|e| located("--alpha", e))
}

/// Smallest N·2^p ≥ 2^grid_exp with p ≥ 4, refined until every operator node
/// in `nodes` is resolved at 16 cells per node spacing.
fn grid_cells(intervals: usize, grid_exp: u32, max_nodes: usize) -> usize {
    let target = (1usize << grid_exp).max(16 * max_nodes);
    let mut cells = intervals * 16;
    while cells < target {
        cells *= 2;
    }
    cells
}

fn options(cfg: &RunConfig, intervals: usize, max_nodes: usize) -> SolveOptions {
    SolveOptions::new(
        grid_cells(intervals, cfg.grid_exp, max_nodes),
        cfg.tol,
        cfg.max_iters,
    )
}

fn problem(cfg: &RunConfig, intervals: usize, n: usize) -> CliResult<FifProblem> {
    let [a, b] = cfg.interval;
    let spec = parse_function(&cfg.function)?;
    let kernel = parse_kernel(&cfg.kernel, cfg.m)?;
    let partition = Partition::uniform(a, b, intervals)?;
    let scaling = scaling_for(cfg, intervals)?;
    let smooth = cfg.command == CommandKind::Smooth;
    let order = if smooth { cfg.r } else { 0 };
    let operator = OperatorConfig::new(kernel, a, b, n, order)?;
    let f = spec.input(cfg, intervals, order)?;
    Ok(if smooth {
        FifProblem::smooth(partition, scaling, operator, f)?
    } else if cfg.discrete {
        FifProblem::discrete(partition, scaling, operator, f)?
    } else {
        if matches!(spec, FunctionSpec::Table(_)) {
            return Err(located("--function", "tabulated data requires --discrete"));
        }
        FifProblem::alpha_fractal(partition, scaling, operator, f)?
    })
}

/// Solves, keeping the best iterate on non-convergence so outputs can still
/// be written before exiting with the non-convergence code.
fn solve_keep(
    problem: &FifProblem,
    opts: &SolveOptions,
) -> CliResult<(FifResult, Option<CliError>)> {
    match solve(problem, opts) {
        Ok(r) => Ok((r, None)),
        Err(FifError::NonConvergence {
            iterations,
            change,
            residual,
            best,
        }) => {
            let message = FifError::NonConvergence {
                iterations,
                change,
                residual,
                best: best.clone(),
            }
            .to_string();
            Ok((*best, Some(CliError::NonConvergence(message))))
        }
        Err(e) => Err(e.into()),
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn result_summary(result: &FifResult) -> Value {
    json!({
        "grid_size": result.grid_size(),
        "residual": result.residual,
        "iterations": result.iterations,
        "contraction": result.contraction,
        "interpolation_slack": result.interpolation_slack,
        "knot_values": result.knot_values,
        "value_bounds": [result.value_bounds.0, result.value_bounds.1],
    })
}

/// f on the render grid, when f is known off the nodes.
fn truth(cfg: &RunConfig, grid: &SampledFunction) -> CliResult<Option<SampledFunction>> {
    Ok(match parse_function(&cfg.function)?.analytic(0) {
        Some((f, _)) => Some(SampledFunction::from_fn(
            grid.a(),
            grid.b(),
            grid.cells(),
            |x| f(x),
        )?),
        None => None,
    })
}

/// Uniform error bound of the configured variant for a rendered result.
fn bound_for(
    cfg: &RunConfig,
    result: &FifResult,
    f: &SampledFunction,
    n: usize,
    intervals: usize,
) -> CliResult<f64> {
    let alpha = result.provenance.scaling().sup_norm();
    let [a, b] = cfg.interval;
    Ok(if cfg.discrete {
        let omega_n = modulus_of_continuity(f, (b - a) / n as f64)?;
        let omega_big = modulus_of_continuity(f, (b - a) / intervals as f64)?;
        error_bound_discrete(alpha, omega_n, omega_big)?
    } else {
        error_bound_alpha(alpha, sup_norm_diff(f, &result.base)?)?
    })
}

fn cmd_build(cfg: &RunConfig) -> CliResult<()> {
    let p = problem(cfg, cfg.big_n, cfg.n)?;
    let (result, failure) = solve_keep(&p, &options(cfg, cfg.big_n, cfg.n))?;
    let f = truth(cfg, &result.values)?;
    let seed = f.as_ref().unwrap_or(&result.height);
    let xs = result.grid();
    let rows: Vec<Vec<String>> = (0..xs.len())
        .map(|j| {
            vec![
                sci(xs[j]),
                sci(seed.values()[j]),
                sci(result.base.values()[j]),
                sci(result.values.values()[j]),
            ]
        })
        .collect();
    let header = ["x", "f", "base", "fif"].map(String::from);
    write_csv(&cfg.out.join("fif.csv"), &header, &rows)?;

    let mut results = result_summary(&result);
    if let Some(f) = &f {
        results["sup_error"] = json!(sup_norm_diff(&result.values, f)?);
        results["error_bound"] = json!(bound_for(cfg, &result, f, cfg.n, cfg.big_n)?);
    }
    let meta = json!({
        "config": cfg,
        "results": results,
        "diagnostics": {
            "converged": failure.is_none(),
            "warnings": result.warnings,
        },
    });
    write_json(&cfg.out.join("meta.json"), &meta)?;
    failure.map_or(Ok(()), Err)
}

fn is_strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn cmd_converge(cfg: &RunConfig) -> CliResult<()> {
    if cfg.discrete && cfg.big_n_ladder.len() != cfg.n_ladder.len() {
        return Err(located("--N-ladder", "must pair one N with every n"));
    }
    let max_n = cfg.n_ladder.iter().copied().max().unwrap_or(1);
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut violations = Vec::new();
    for (idx, &n) in cfg.n_ladder.iter().enumerate() {
        let intervals = if cfg.discrete {
            cfg.big_n_ladder[idx]
        } else {
            cfg.big_n
        };
        let p = problem(cfg, intervals, n)?;
        let result = solve(&p, &options(cfg, intervals, max_n.max(intervals)))?;
        let f = truth(cfg, &result.values)?
            .ok_or_else(|| located("--function", "convergence ladders need f off the nodes"))?;
        let err = sup_norm_diff(&result.values, &f)?;
        let bound = bound_for(cfg, &result, &f, n, intervals)?;
        if err > bound + 2.0 * result.interpolation_slack {
            violations.push(format!(
                "n = {n}: sup error {err:e} exceeds bound {bound:e}"
            ));
        }
        let ratio = if bound > 0.0 { err / bound } else { 0.0 };
        rows.push(vec![
            n.to_string(),
            intervals.to_string(),
            sci(err),
            sci(bound),
            sci(ratio),
        ]);
        errors.push(err);
    }
    let header = ["n", "N", "sup_error", "bound", "ratio"].map(String::from);
    write_csv(&cfg.out.join("converge.csv"), &header, &rows)?;
    if !is_strictly_decreasing(&errors) {
        violations.push("sup_error is not strictly decreasing".into());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::CrossCheck(violations.join("; ")))
    }
}

fn cmd_dimension(cfg: &RunConfig) -> CliResult<()> {
    let p = problem(cfg, cfg.big_n, cfg.n)?;
    if !p.scaling().is_constant() {
        return Err(located("--alpha", FifError::ConstantScalingsRequired));
    }
    let (result, failure) = solve_keep(&p, &options(cfg, cfg.big_n, cfg.n))?;
    let report = dimension_report(&result, &default_box_scales())?;
    let mut warnings = result.warnings.clone();
    let mut mismatch = None;
    match report.theoretical {
        None => {
            let w = "not applicable: knot data are collinear".to_string();
            eprintln!("fif: warning: {w}");
            warnings.push(w);
        }
        Some(d) if (report.estimated - d).abs() > DIMENSION_TOLERANCE => {
            mismatch = Some(CliError::CrossCheck(format!(
                "estimated dimension {} differs from {d} by more than {DIMENSION_TOLERANCE}",
                report.estimated
            )));
        }
        Some(_) => {}
    }
    let out = json!({
        "config": cfg,
        "results": report,
        "diagnostics": {
            "render": result_summary(&result),
            "converged": failure.is_none(),
            "warnings": warnings,
        },
    });
    write_json(&cfg.out.join("dimension.json"), &out)?;
    match failure.or(mismatch) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Central differences (one-sided at the ends).
fn finite_difference(values: &[f64], step: f64) -> Vec<f64> {
    let last = values.len() - 1;
    (0..=last)
        .map(|j| match j {
            0 => (values[1] - values[0]) / step,
            j if j == last => (values[last] - values[last - 1]) / step,
            j => (values[j + 1] - values[j - 1]) / (2.0 * step),
        })
        .collect()
}

fn cmd_smooth(cfg: &RunConfig) -> CliResult<()> {
    let p = problem(cfg, cfg.big_n, cfg.n)?;
    let (result, failure) = solve_keep(&p, &options(cfg, cfg.big_n, cfg.n))?;
    let xs = result.grid();
    let step = result.values.step();
    let mut columns: Vec<&[f64]> = vec![result.values.values()];
    columns.extend(result.derivatives.iter().map(|d| d.values.values()));
    let checks: Vec<Vec<f64>> = columns[..columns.len() - 1]
        .iter()
        .map(|c| finite_difference(c, step))
        .collect();
    let mut header = vec!["x".to_string(), "fif".to_string()];
    header.extend(
        result
            .derivatives
            .iter()
            .map(|d| format!("fif_d{}", d.order)),
    );
    header.extend(
        result
            .derivatives
            .iter()
            .map(|d| format!("fd_check_d{}", d.order)),
    );
    let rows: Vec<Vec<String>> = (0..xs.len())
        .map(|j| {
            std::iter::once(sci(xs[j]))
                .chain(columns.iter().map(|c| sci(c[j])))
                .chain(checks.iter().map(|c| sci(c[j])))
                .collect()
        })
        .collect();
    write_csv(&cfg.out.join("smooth.csv"), &header, &rows)?;

    let derivatives: Vec<Value> = result
        .derivatives
        .iter()
        .zip(&checks)
        .map(|(d, fd)| {
            let inner = 1..fd.len() - 1;
            let fd_error = inner
                .map(|j| (fd[j] - d.values.values()[j]).abs())
                .fold(0.0, f64::max);
            json!({
                "order": d.order,
                "residual": d.residual,
                "iterations": d.iterations,
                "contraction": d.contraction,
                "start_value": d.start_value,
                "end_value": d.end_value,
                "endpoint_error": d.endpoint_error,
                "matching_residual": d.matching_residual,
                "fd_check_error": fd_error,
            })
        })
        .collect();
    let mut results = result_summary(&result);
    results["derivatives"] = Value::Array(derivatives);
    let meta = json!({
        "config": cfg,
        "results": results,
        "diagnostics": {
            "converged": failure.is_none(),
            "warnings": result.warnings,
        },
    });
    write_json(&cfg.out.join("meta.json"), &meta)?;
    failure.map_or(Ok(()), Err)
}

fn cmd_holder(cfg: &RunConfig) -> CliResult<()> {
    let [a, b] = cfg.interval;
    let scaling = scaling_for(cfg, cfg.big_n)?;
    scaling.check_holder(&Partition::uniform(a, b, cfg.big_n)?, cfg.mu)?;
    let params = HolderParams::new(cfg.mu)?;
    let max_n = cfg.n_ladder.iter().copied().max().unwrap_or(1);
    let mut rows = Vec::new();
    let mut combined = Vec::new();
    for &n in &cfg.n_ladder {
        let p = problem(cfg, cfg.big_n, n)?;
        let result = solve(&p, &options(cfg, cfg.big_n, max_n))?;
        let f = truth(cfg, &result.values)?
            .ok_or_else(|| located("--function", "Hölder ladders need f off the nodes"))?;
        let diff: Vec<f64> = result
            .values
            .values()
            .iter()
            .zip(f.values())
            .map(|(u, v)| u - v)
            .collect();
        let diff = SampledFunction::new(a, b, diff)?;
        let report = holder_seminorm(&diff.thin(params.max_points)?, &params)?;
        rows.push(vec![
            n.to_string(),
            sci(diff.sup_norm()),
            sci(report.seminorm),
            sci(report.combined),
        ]);
        combined.push(report.combined);
    }
    let header = [
        "n",
        "sup_error",
        "holder_seminorm_error",
        "combined_0mu_error",
    ]
    .map(String::from);
    write_csv(&cfg.out.join("holder.csv"), &header, &rows)?;
    if is_strictly_decreasing(&combined) {
        Ok(())
    } else {
        Err(CliError::CrossCheck(
            "combined Hölder error is not decreasing".into(),
        ))
    }
}

fn cmd_bounds(cfg: &RunConfig) -> CliResult<()> {
    let [a, b] = cfg.interval;
    let spec = parse_function(&cfg.function)?;
    let (f, _) = spec
        .analytic(0)
        .ok_or_else(|| located("--function", "bounds need f off the nodes"))?;
    let input = FunctionInput::analytic(move |x| f(x));
    let kernel = parse_kernel(&cfg.kernel, cfg.m)?;
    let alpha = scaling_for(cfg, cfg.big_n)?.sup_norm();
    let max_n = cfg
        .n_ladder
        .iter()
        .copied()
        .max()
        .unwrap_or(1)
        .max(cfg.big_n);
    let cells = grid_cells(cfg.big_n, cfg.grid_exp, max_n);
    let samples = match &input {
        FunctionInput::Analytic { f, .. } => SampledFunction::from_fn(a, b, cells, |x| f(x))?,
        FunctionInput::Tabulated(_) => unreachable!(),
    };
    let omega_big = modulus_of_continuity(&samples, (b - a) / cfg.big_n as f64)?;
    let header = [
        "n",
        "N",
        "alpha_sup",
        "base_gap",
        "bound_alpha",
        "omega_n",
        "omega_N",
        "bound_discrete",
    ]
    .map(String::from);
    let mut rows = Vec::new();
    for &n in &cfg.n_ladder {
        let op = NnOperator::new(OperatorConfig::new(kernel.clone(), a, b, n, 0)?, &input)?;
        let xs = samples.xs();
        let gap = xs
            .iter()
            .zip(samples.values())
            .map(|(&x, v)| Ok((op.eval_base(x)? - v).abs()))
            .collect::<Result<Vec<f64>, FifError>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let omega_n = modulus_of_continuity(&samples, (b - a) / n as f64)?;
        rows.push(vec![
            n.to_string(),
            cfg.big_n.to_string(),
            sci(alpha),
            sci(gap),
            sci(error_bound_alpha(alpha, gap)?),
            sci(omega_n),
            sci(omega_big),
            sci(error_bound_discrete(alpha, omega_n, omega_big)?),
        ]);
    }
    println!("{}", header.join("\t"));
    for row in &rows {
        println!("{}", row.join("\t"));
    }
    write_csv(&cfg.out.join("bounds.csv"), &header, &rows)
}
