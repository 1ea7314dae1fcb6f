//! Command-line front end.
//!
//! ```text
//! frozen-wave <solve|field|verify|example|report> <FIXTURE> [flags]
//! ```
//!
//! Settings may also come from a TOML file given with `--config`; flags win
//! over the file. Exit status is 0 when every check passes, 1 on a failed
//! check and 2 on a configuration error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::{fixture_with_params, oracle_compare, Fixture};
use crate::freezing::{
    bridge_identity, generator_involution, generator_pair, generator_solution, reflection_identity_check,
    residual_pde, sample_grid, synthesize_fields, validate_problem, verify_freezing_boundary, BoundaryOptions, Mode,
    PdeOptions, PdeResidualReport,
};
use crate::funceq::{involution_residual, residual_functional_eq, SolutionF, TOL_ROOT};
use crate::report::{ResidualReport, Sample};
use crate::scalar::numeric_derivative;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Samples of `F` for `solve` when no grid is given.
pub const SOLVE_SAMPLES: usize = 1001;

/// Tolerance of `phi(phi(u)) = u` in `verify`.
pub const INVOLUTION_TOL: f64 = 1e-9;

/// Tolerance of `F'(x0) = -2` at fixed points.
pub const FIXED_SLOPE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Field,
    Verify,
    Example,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "frozen-wave", version, about = "Solutions of F(x + F(x)) = -F(x) and frozen wave fields")]
struct Args {
    /// solve, field, verify, example or report
    #[arg(value_enum)]
    command: Option<Command>,
    /// Fixture name (linear, golab_schinzel, piecewise_constant, hyperbolic,
    /// quadratic, ex51, ex52, ex53)
    fixture: Option<String>,
    /// Grid as NXxNT, or a single N
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    tol_feq: Option<f64>,
    #[arg(long)]
    tol_pde: Option<f64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Family parameter, repeatable
    #[arg(long = "param", allow_negative_numbers = true)]
    params: Vec<f64>,
    /// TOML file with the same settings
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add R z^2 to the wave profile inside sigma (negative control)
    #[arg(long, allow_negative_numbers = true)]
    corrupt_sigma: Option<f64>,
}

/// Settings read from `--config`.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub fixture: Option<String>,
    pub grid: Option<String>,
    pub t_max: Option<f64>,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub params: Vec<f64>,
    pub corrupt_sigma: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub feq: Option<f64>,
    pub pde: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::InvalidParameter(format!("bad config {}: {e}", path.display())))
    }
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub fixture: String,
    pub params: Vec<f64>,
    pub grid: Option<(usize, usize)>,
    pub t_max: Option<f64>,
    pub tol_feq: Option<f64>,
    pub tol_pde: Option<f64>,
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub corrupt_sigma: Option<f64>,
}

/// Parses `NXxNT` or `N` (meaning `N x N`). Both sizes must be at least 3.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("grid `{s}` is not of the form NXxNT"));
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let (a, b) = match s.split_once(['x', 'X']) {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a < 3 || b < 3 {
        return Err(Error::InvalidParameter(format!("grid {a}x{b} needs at least 3 points per axis")));
    }
    Ok((a, b))
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(Error::InvalidParameter(format!("{name} = {x} must be positive"))),
        other => Ok(other),
    }
}

impl RunConfig {
    fn from_args(args: Args) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let command = args
            .command
            .or(file.command)
            .ok_or_else(|| Error::InvalidParameter("missing command".into()))?;
        let fixture = args
            .fixture
            .or(file.fixture)
            .ok_or_else(|| Error::InvalidParameter("missing fixture name".into()))?;
        let grid = args.grid.or(file.grid).map(|g| parse_grid(&g)).transpose()?;
        let mode = args
            .mode
            .or(file.mode)
            .map(|m| m.parse::<Mode>().map_err(Error::InvalidParameter))
            .transpose()?;
        let params = if args.params.is_empty() { file.params } else { args.params };
        let default_format = if command == Command::Field { Format::Csv } else { Format::Json };
        Ok(Self {
            command,
            fixture,
            params,
            grid,
            t_max: positive("t_max", args.t_max.or(file.t_max))?,
            tol_feq: positive("tol_feq", args.tol_feq.or(file.tolerances.feq))?,
            tol_pde: positive("tol_pde", args.tol_pde.or(file.tolerances.pde))?,
            mode,
            out: args.out.or(file.out),
            format: args.format.or(file.format).unwrap_or(default_format),
            corrupt_sigma: args.corrupt_sigma.or(file.corrupt_sigma),
        })
    }
}

/// One line of the verification summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub sup_norm: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub points: usize,
    pub worst: Option<Sample>,
}

impl CheckSummary {
    fn of(name: impl Into<String>, r: &ResidualReport) -> Self {
        Self {
            name: name.into(),
            sup_norm: r.sup_norm,
            tolerance: r.tolerance,
            pass: r.pass,
            points: r.len(),
            worst: r.worst().map(|w| w.0),
        }
    }

    fn failed(name: impl Into<String>, witness: Option<Sample>) -> Self {
        Self { name: name.into(), sup_norm: f64::INFINITY, tolerance: 0.0, pass: false, points: 0, worst: witness }
    }
}

/// Everything `verify` and `report` compute for one fixture.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub fixture: String,
    pub mode: Option<Mode>,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pde: Option<PdeSummary>,
    #[serde(skip)]
    pub reports: Vec<ResidualReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PdeSummary {
    pub delta: f64,
    pub c_estimate: f64,
    pub tolerance: f64,
    pub halved: [f64; 3],
    pub richardson: [f64; 3],
}

impl From<&PdeResidualReport> for PdeSummary {
    fn from(r: &PdeResidualReport) -> Self {
        Self { delta: r.delta, c_estimate: r.c_estimate, tolerance: r.tolerance, halved: r.halved, richardson: r.richardson }
    }
}

impl Verification {
    pub fn first_failure(&self) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| !c.pass)
    }

    fn push(&mut self, name: &str, r: ResidualReport) {
        self.checks.push(CheckSummary::of(name, &r));
        self.reports.push(r.relabel(name));
    }

    fn push_result(&mut self, name: &str, r: Result<ResidualReport>) {
        match r {
            Ok(r) => self.push(name, r),
            Err(e) => self.checks.push(CheckSummary::failed(format!("{name}: {e}"), None)),
        }
    }
}

fn solution_checks(v: &mut Verification, prefix: &str, sol: &SolutionF, cfg: &RunConfig) {
    let sol = match cfg.tol_feq {
        Some(t) => sol.clone().with_tolerance(t),
        None => sol.clone(),
    };
    let n = cfg.grid.map_or(SOLVE_SAMPLES, |g| g.0);
    let feq = residual_functional_eq(&sol, n);
    if let Ok(r) = &feq {
        let pts: Vec<f64> = r.grid.iter().filter_map(|s| if let Sample::X(x) = s { Some(*x) } else { None }).collect();
        let phi = sol.involution();
        let inv = involution_residual(&phi, &pts, INVOLUTION_TOL);
        v.push_result(&format!("{prefix}functional equation"), feq);
        v.push(&format!("{prefix}involution"), inv);
    } else {
        v.push_result(&format!("{prefix}functional equation"), feq);
    }
    if !sol.fixed_points().is_empty() {
        let xs = sol.fixed_points().to_vec();
        let res: Vec<f64> = xs
            .iter()
            .map(|&x0| {
                let moved = (sol.phi(x0) - x0).abs() / (1.0 + x0.abs());
                let slope = numeric_derivative(sol.function(), x0).map_or(f64::NAN, |d| (d + 2.0).abs());
                // both parts share one tolerance after scaling
                slope.max(moved * FIXED_SLOPE_TOL / TOL_ROOT)
            })
            .collect();
        let r = ResidualReport::new("fixed points", xs.into_iter().map(Sample::X).collect(), res, FIXED_SLOPE_TOL);
        v.push(&format!("{prefix}fixed points"), r);
    }
}

/// Runs the verification suite for a fixture.
pub fn verify_fixture(fx: &Fixture, cfg: &RunConfig) -> Verification {
    let mut v = Verification {
        fixture: fx.name().to_string(),
        mode: None,
        pass: false,
        checks: Vec::new(),
        pde: None,
        reports: Vec::new(),
    };
    if let Ok(sol) = fx.solution() {
        solution_checks(&mut v, "", sol, cfg);
    }
    if let Ok(p) = fx.problem() {
        let p = match cfg.mode {
            Some(m) => p.clone().with_mode(m),
            None => p.clone(),
        };
        v.mode = Some(p.mode());
        if p.mode() == Mode::Strict {
            for f in validate_problem(&p) {
                let name = format!("hypothesis {}", f.hypothesis);
                if f.passed {
                    v.checks.push(CheckSummary { name, sup_norm: 0.0, tolerance: 0.0, pass: true, points: 0, worst: None });
                } else {
                    v.checks.push(CheckSummary::failed(name, f.witness.map(Sample::X)));
                }
            }
        }
        match generator_pair(&p) {
            Err(e) => v.checks.push(CheckSummary::failed(format!("generator: {e}"), None)),
            Ok((_, g_inv)) => {
                match generator_solution(&p) {
                    Ok(sol) => solution_checks(&mut v, "generator ", &sol, cfg),
                    Err(e) => v.checks.push(CheckSummary::failed(format!("generator solution: {e}"), None)),
                }
                let phi = generator_involution(&g_inv);
                let pts = g_inv.domain().sample(201);
                v.push("generator involution on the core", involution_residual(&phi, &pts, INVOLUTION_TOL));
                v.push_result("bridge identity", bridge_identity(&p, 101));
                v.push_result("reflection identity", reflection_identity_check(&p, 101));
                field_checks(&mut v, fx, &p, cfg);
            }
        }
    }
    v.pass = !v.checks.is_empty() && v.checks.iter().all(|c| c.pass);
    v
}

fn field_checks(v: &mut Verification, fx: &Fixture, p: &crate::freezing::FreezingProblem, cfg: &RunConfig) {
    let fp = match synthesize_fields(p) {
        Ok(fp) => fp,
        Err(e) => {
            v.checks.push(CheckSummary::failed(format!("fields: {e}"), None));
            return;
        }
    };
    let fp = match cfg.corrupt_sigma {
        Some(r) => fp.with_sigma_perturbation(move |z| r * z * z),
        None => fp,
    };
    let (n_x, n_t) = cfg.grid.unwrap_or((101, 101));
    let opts = PdeOptions { n_x, n_t, t_max: cfg.t_max, tolerance: cfg.tol_pde, ..Default::default() };
    match residual_pde(&fp, &opts) {
        Ok(r) => {
            v.pde = Some(PdeSummary::from(&r));
            v.push("pde d_t mu + d_x sigma", r.momentum);
            v.push("pde d_t sigma + d_x mu", r.continuity);
            v.push("pde wave equation", r.wave);
        }
        Err(e) => v.checks.push(CheckSummary::failed(format!("pde: {e}"), None)),
    }
    let bopts = BoundaryOptions { terminal_tol: fx.boundary_tolerance(), ..Default::default() };
    match verify_freezing_boundary(&fp, &bopts) {
        Ok(b) => {
            v.push("freezing front first zero", b.first_zero);
            v.push("freezing front mu = h", b.terminal);
            v.push("freezing front antisymmetry", b.antisymmetry);
            v.push("sigma positive before freezing", b.positivity);
            if let Some(d) = b.monotone_decay {
                v.push("sigma decreasing in t", d);
            }
        }
        Err(e) => v.checks.push(CheckSummary::failed(format!("freezing boundary: {e}"), None)),
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownFixture(_)
        | Error::InvalidParameter(_)
        | Error::MissingClosedForm { .. }
        | Error::DegenerateFamily(_)
        | Error::EmptyGrid(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

struct Output {
    text: String,
    status: i32,
    diagnostic: Option<String>,
}

fn failure_line(v: &Verification) -> Option<String> {
    v.first_failure().map(|c| match c.worst {
        Some(w) => format!(
            "verification failed: {} (sup = {:e}, tolerance = {:e}) at {w}",
            c.name, c.sup_norm, c.tolerance
        ),
        None => format!("verification failed: {}", c.name),
    })
}

fn execute(cfg: &RunConfig) -> Result<Output> {
    let fx = fixture_with_params(&cfg.fixture, &cfg.params)?;
    match cfg.command {
        Command::Solve => {
            let sol = fx.solution()?;
            let sol = match cfg.tol_feq {
                Some(t) => sol.clone().with_tolerance(t),
                None => sol.clone(),
            };
            let n = cfg.grid.map_or(SOLVE_SAMPLES, |g| g.0);
            let report = residual_functional_eq(&sol, n)?;
            let xs: Vec<f64> = report.grid.iter().filter_map(|s| if let Sample::X(x) = s { Some(*x) } else { None }).collect();
            let text = match cfg.format {
                Format::Csv => {
                    let mut s = String::from("x,F,phi,residual\n");
                    for (x, r) in xs.iter().zip(&report.residuals) {
                        let _ = writeln!(s, "{},{},{},{}", fmt17(*x), fmt17(sol.eval(*x)), fmt17(sol.phi(*x)), fmt17(*r));
                    }
                    s
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Point {
                        x: f64,
                        f: f64,
                        phi: f64,
                    }
                    #[derive(Serialize)]
                    struct Solve<'a> {
                        fixture: &'a str,
                        label: &'a str,
                        fixed_points: &'a [f64],
                        samples: Vec<Point>,
                        residual: &'a ResidualReport,
                    }
                    let samples = xs.iter().map(|&x| Point { x, f: sol.eval(x), phi: sol.phi(x) }).collect();
                    to_json(&Solve {
                        fixture: fx.name(),
                        label: sol.label(),
                        fixed_points: sol.fixed_points(),
                        samples,
                        residual: &report,
                    })
                }
            };
            let pass = report.pass;
            let diagnostic = (!pass).then(|| {
                let (w, r) = report.worst().expect("non-empty");
                format!("verification failed: functional equation (sup = {r:e}, tolerance = {:e}) at {w}", report.tolerance)
            });
            Ok(Output { text, status: if pass { EXIT_PASS } else { EXIT_FAIL }, diagnostic })
        }
        Command::Field => {
            let p = fx.problem()?;
            let p = match cfg.mode {
                Some(m) => p.clone().with_mode(m),
                None => p.clone(),
            };
            let fp = synthesize_fields(&p)?;
            let fp = match cfg.corrupt_sigma {
                Some(r) => fp.with_sigma_perturbation(move |z| r * z * z),
                None => fp,
            };
            let (n_x, n_t) = cfg.grid.unwrap_or((101, 101));
            let t_max = cfg.t_max.unwrap_or_else(|| p.latest_freezing());
            let grid = sample_grid(&fp, n_x, n_t, t_max)?;
            let text = match cfg.format {
                Format::Csv => grid.to_csv(),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Grid<'a> {
                        fixture: &'a str,
                        xs: &'a [f64],
                        ts: &'a [f64],
                        sigma: &'a [f64],
                        mu: &'a [f64],
                        frozen: &'a [bool],
                    }
                    to_json(&Grid {
                        fixture: fx.name(),
                        xs: &grid.xs,
                        ts: &grid.ts,
                        sigma: &grid.sigma,
                        mu: &grid.mu,
                        frozen: &grid.frozen,
                    })
                }
            };
            Ok(Output { text, status: EXIT_PASS, diagnostic: None })
        }
        Command::Verify | Command::Report => {
            let v = verify_fixture(&fx, cfg);
            let text = match (cfg.command, cfg.format) {
                (_, Format::Csv) => {
                    let mut s = String::from("check,sup_norm,tolerance,pass\n");
                    for c in &v.checks {
                        let _ = writeln!(s, "\"{}\",{},{},{}", c.name, fmt17(c.sup_norm), fmt17(c.tolerance), c.pass);
                    }
                    s
                }
                (Command::Verify, Format::Json) => to_json(&v),
                _ => {
                    #[derive(Serialize)]
                    struct Full<'a> {
                        #[serde(flatten)]
                        summary: &'a Verification,
                        reports: &'a [ResidualReport],
                    }
                    to_json(&Full { summary: &v, reports: &v.reports })
                }
            };
            let status = if v.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok(Output { text, status, diagnostic: failure_line(&v) })
        }
        Command::Example => {
            let report = if fx.problem().is_ok() {
                let (n_x, n_t) = cfg.grid.unwrap_or(fx.oracle_grid());
                oracle_compare(fx.name(), n_x, n_t)?
            } else {
                let sol = fx.solution()?.clone().with_tolerance(cfg.tol_feq.unwrap_or(1e-12));
                residual_functional_eq(&sol, cfg.grid.map_or(SOLVE_SAMPLES, |g| g.0))?
            };
            let diagnostic = (!report.pass).then(|| {
                let (w, r) = report.worst().expect("non-empty");
                format!("verification failed: {} (sup = {r:e}, tolerance = {:e}) at {w}", report.label, report.tolerance)
            });
            let text = match cfg.format {
                Format::Json => to_json(&report),
                Format::Csv => {
                    let mut s = String::from("x,t,residual\n");
                    for (g, r) in report.grid.iter().zip(&report.residuals) {
                        let (x, t) = match *g {
                            Sample::X(x) => (x, f64::NAN),
                            Sample::XT([x, t]) => (x, t),
                        };
                        let _ = writeln!(s, "{},{},{}", fmt17(x), fmt17(t), fmt17(*r));
                    }
                    s
                }
            };
            Ok(Output { text, status: if report.pass { EXIT_PASS } else { EXIT_FAIL }, diagnostic })
        }
    }
}

/// Parses `args` (program name first), runs, writes artifacts and returns
/// the exit status.
pub fn run_with<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "configuration error: {e}");
            return EXIT_CONFIG;
        }
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == EXIT_CONFIG { "configuration error" } else { "verification failed" };
            let _ = writeln!(stderr, "{kind}: {e}");
            return code;
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &out.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(out.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "configuration error: {e}");
        return EXIT_CONFIG;
    }
    if let Some(d) = out.diagnostic {
        let _ = writeln!(stderr, "{d}");
    }
    out.status
}

/// Entry point used by the binary.
pub fn main_with<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
