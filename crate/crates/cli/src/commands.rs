//! The four batch commands. Every command writes its artifacts under
//! `Config::out` and reports whether its checks passed.

use std::fs;
use std::path::{Path, PathBuf};

use betweenness::axioms::{default_lambdas, AxiomLab, AxiomReport, LabConfig};
use betweenness::engine::RepresentationContext;
use betweenness::lp::LpError;
use betweenness::separation::{
    hull_contains, local_polytope, polytope_samples, separate, verify_separation, SeparationError, CONSISTENCY_TOL,
    DEFAULT_SAMPLE_RESOLUTION,
};
use betweenness::triangle::{fit_line, level_curve, TriangleAxes, TriangleError};
use betweenness::{degenerate, grid, EngineError, Lottery, Polytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::{header, Table};
use crate::spec::{self, LoadedModel};
use crate::{svg, CliError};

/// Largest perpendicular distance from the fitted line accepted by `triangle`.
pub const COLLINEARITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Repr,
    Check,
    Triangle,
    Separation,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Repr => "repr",
            Command::Check => "check",
            Command::Triangle => "triangle",
            Command::Separation => "separation",
        }
    }

    fn default_grid(self) -> usize {
        match self {
            Command::Repr => 8,
            Command::Check | Command::Separation => 6,
            Command::Triangle => 20,
        }
    }

    fn default_levels(self) -> Vec<f64> {
        match self {
            Command::Separation => vec![0.2, 0.5, 0.8],
            _ => vec![0.2, 0.4, 0.6, 0.8],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: PathBuf,
    /// Simplex grid resolution; for `triangle`, the number of slices.
    pub grid: Option<usize>,
    /// `repr` evaluates `u(x, k / t_grid)` for `k = 0..=t_grid`.
    pub t_grid: usize,
    pub levels: Option<Vec<f64>>,
    pub seed: u64,
    pub out: PathBuf,
}

impl Config {
    pub fn new(model: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self { model: model.into(), grid: None, t_grid: 10, levels: None, seed: 0, out: out.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    /// One line per failed check, for the diagnostic stream.
    pub failures: Vec<String>,
}

pub fn run(command: Command, config: &Config) -> Result<Outcome, CliError> {
    let loaded = spec::load(&config.model)?;
    let resolution = config.grid.unwrap_or_else(|| command.default_grid());
    if resolution == 0 {
        return Err(CliError::Input("--grid must be at least 1".into()));
    }
    if config.t_grid == 0 {
        return Err(CliError::Input("--t-grid must be at least 1".into()));
    }
    let levels = config.levels.clone().unwrap_or_else(|| command.default_levels());
    fs::create_dir_all(&config.out)?;
    match command {
        Command::Repr => repr(loaded, resolution, config),
        Command::Check => check(loaded, resolution, config),
        Command::Triangle => triangle(loaded, resolution, &levels, &config.out),
        Command::Separation => separation(loaded, resolution, &levels, config),
    }
}

fn lotteries(n: usize, resolution: usize) -> Result<Vec<Lottery>, CliError> {
    grid(n, resolution).map_err(|e| CliError::Input(e.to_string()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct ReprSummary<'a> {
    command: &'static str,
    model: &'a str,
    outcomes: usize,
    grid: usize,
    t_grid: usize,
    lotteries: usize,
    x_star: &'a Lottery,
    x_low: &'a Lottery,
    tol_t: f64,
    max_iter: usize,
    eps_pref: f64,
    /// `max |fixed_point_of_u(x) - U(x)|`.
    fixed_point_residual_max: f64,
    /// `max |u(x, U(x)) - U(x)|`.
    fixed_point_gap_max: f64,
    passed: bool,
}

fn repr(loaded: LoadedModel, resolution: usize, config: &Config) -> Result<Outcome, CliError> {
    let n = loaded.outcomes;
    let ctx = RepresentationContext::new(loaded.model, n)?;
    let xs = lotteries(n, resolution)?;
    let mut big_u = Table::new(&header(n, &["U"]));
    let mut small_u = Table::new(&header(n, &["t", "u"]));
    let (mut residual, mut gap) = (0.0f64, 0.0f64);
    for x in &xs {
        let u = ctx.solve_u(x)?;
        big_u.row(&[x.probs(), &[u]].concat());
        residual = residual.max((ctx.fixed_point_of_u(x)? - u).abs());
        gap = gap.max((ctx.eval_u(x, u)? - u).abs());
        for k in 0..=config.t_grid {
            let t = k as f64 / config.t_grid as f64;
            small_u.row(&[x.probs(), &[t, ctx.eval_u(x, t)?]].concat());
        }
    }
    let bound = 10.0 * ctx.tol_t();
    let passed = residual <= bound;
    let summary = ReprSummary {
        command: "repr",
        model: ctx.model().family(),
        outcomes: n,
        grid: resolution,
        t_grid: config.t_grid,
        lotteries: xs.len(),
        x_star: ctx.x_star(),
        x_low: ctx.x_low(),
        tol_t: ctx.tol_t(),
        max_iter: ctx.max_iter(),
        eps_pref: ctx.model().eps_pref(),
        fixed_point_residual_max: residual,
        fixed_point_gap_max: gap,
        passed,
    };
    let files = ["U.csv", "u.csv", "summary.json"].map(|f| config.out.join(f));
    big_u.write(&files[0])?;
    small_u.write(&files[1])?;
    write_json(&files[2], &summary)?;
    let failures =
        if passed { Vec::new() } else { vec![format!("fixed-point residual {residual:e} exceeds {bound:e}")] };
    Ok(Outcome { passed, files: files.to_vec(), failures })
}

#[derive(Serialize)]
struct CheckSummary<'a> {
    command: &'static str,
    model: &'a str,
    samples: usize,
    lambdas: Vec<f64>,
    seed: u64,
    passed: bool,
    reports: Vec<AxiomReport>,
}

fn check(loaded: LoadedModel, resolution: usize, config: &Config) -> Result<Outcome, CliError> {
    let samples = match loaded.support {
        Some(s) => s,
        None => lotteries(loaded.outcomes, resolution)?,
    };
    let lab = AxiomLab::with_config(&loaded.model, LabConfig { seed: config.seed, ..LabConfig::default() });
    let lambdas = default_lambdas();
    let reports = lab.check_all(&samples, &lambdas);
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{:?} failed: {} violation(s)", r.axiom, r.violations))
        .collect();
    let summary = CheckSummary {
        command: "check",
        model: loaded.model.family(),
        samples: samples.len(),
        lambdas,
        seed: config.seed,
        passed: failures.is_empty(),
        reports,
    };
    let path = config.out.join("check.json");
    write_json(&path, &summary)?;
    Ok(Outcome { passed: summary.passed, files: vec![path], failures })
}

#[derive(Serialize)]
struct CurveSummary {
    level: f64,
    points: usize,
    collinearity_residual: f64,
    /// `p_best = intercept + slope * p_worst`, when the curve is not vertical.
    intercept: Option<f64>,
    slope: Option<f64>,
    passed: bool,
}

#[derive(Serialize)]
struct TriangleSummary<'a> {
    command: &'static str,
    model: &'a str,
    axes: TriangleAxes,
    slices: usize,
    tolerance: f64,
    passed: bool,
    curves: Vec<CurveSummary>,
}

fn triangle(loaded: LoadedModel, slices: usize, levels: &[f64], out: &Path) -> Result<Outcome, CliError> {
    if loaded.outcomes != 3 {
        return Err(TriangleError::WrongDimension(loaded.outcomes).into());
    }
    let ctx = RepresentationContext::new(loaded.model, 3)?;
    let axes = TriangleAxes::of(&ctx)?;
    let mut table = Table::new(&header(3, &["level", "p_worst", "p_best"]));
    let mut curves = Vec::new();
    let mut polylines = Vec::new();
    let mut failures = Vec::new();
    for &level in levels {
        let curve = level_curve(&ctx, level, slices)?;
        let projected: Vec<(f64, f64)> = curve.points.iter().map(|p| axes.project(p)).collect();
        for (p, &(w, b)) in curve.points.iter().zip(&projected) {
            table.row(&[p.probs(), &[level, w, b]].concat());
        }
        let fit = fit_line(&projected);
        let passed = curve.collinearity_residual <= COLLINEARITY_TOL;
        if !passed {
            failures.push(format!("level {level}: collinearity residual {:e}", curve.collinearity_residual));
        }
        curves.push(CurveSummary {
            level,
            points: curve.points.len(),
            collinearity_residual: curve.collinearity_residual,
            intercept: fit.map(|f| f.0),
            slope: fit.map(|f| f.1),
            passed,
        });
        polylines.push((level, projected));
    }
    let family = ctx.model().family();
    let summary = TriangleSummary {
        command: "triangle",
        model: family,
        axes,
        slices,
        tolerance: COLLINEARITY_TOL,
        passed: failures.is_empty(),
        curves,
    };
    let files = ["triangle.csv", "triangle.svg", "triangle.json"].map(|f| out.join(f));
    table.write(&files[0])?;
    fs::write(&files[1], svg::render(&polylines, &format!("{family}: indifference curves")))?;
    write_json(&files[2], &summary)?;
    Ok(Outcome { passed: summary.passed, files: files.to_vec(), failures })
}

#[derive(Serialize)]
struct PolytopeResult {
    generators: usize,
    passed: bool,
    normalized: Option<bool>,
    chord_residual: Option<f64>,
    samples_checked: usize,
    violations: usize,
    value: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct InstanceResult {
    x: Lottery,
    t: f64,
    engine_value: Option<f64>,
    polytopes: Vec<PolytopeResult>,
    max_discrepancy: Option<f64>,
    passed: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct SeparationSummary<'a> {
    command: &'static str,
    model: &'a str,
    grid: usize,
    levels: &'a [f64],
    seed: u64,
    sample_resolution: usize,
    tolerance: f64,
    instances: usize,
    failed: usize,
    max_discrepancy: f64,
    passed: bool,
    results: Vec<InstanceResult>,
}

/// Errors that say the preference admits no separator, as opposed to a
/// solver breaking down.
fn is_property_failure(e: &SeparationError) -> bool {
    matches!(
        e,
        SeparationError::Infeasible { .. }
            | SeparationError::MembershipViolation { .. }
            | SeparationError::MissingExtremes
            | SeparationError::SampleOutsideHull { .. }
            | SeparationError::Lp(LpError::Infeasible)
            | SeparationError::Engine(
                EngineError::NoCrossing { .. }
                    | EngineError::NonMonotoneChord { .. }
                    | EngineError::MultipleFixedPoints { .. }
            )
    )
}

fn tagged(e: &SeparationError) -> String {
    crate::tagged(e.name(), e)
}

fn random_lottery(rng: &mut ChaCha8Rng, n: usize) -> Lottery {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    Lottery::new(raw.into_iter().map(|r| r / total).collect()).expect("normalized draw")
}

/// `C(x)`, `C(x)` widened by two seeded random lotteries, and the whole
/// simplex together with `x`.
fn polytopes_for(ctx: &RepresentationContext, x: &Lottery, rng: &mut ChaCha8Rng) -> Vec<Polytope> {
    let n = x.len();
    let local = local_polytope(ctx, x);
    let widened = |y: Lottery| {
        let mut vs = local.vertices().to_vec();
        vs.push(y);
        Polytope::new(vs).expect("equal dimensions")
    };
    let p1 = widened(random_lottery(rng, n));
    let p2 = widened(random_lottery(rng, n));
    let mut full: Vec<Lottery> = (0..n).map(|i| degenerate(i, n).expect("vertex")).collect();
    if x.degenerate_index().is_none() {
        full.push(x.clone());
    }
    vec![local, p1, p2, Polytope::new(full).expect("equal dimensions")]
}

fn separate_on(
    ctx: &RepresentationContext,
    x: &Lottery,
    t: f64,
    polytope: &Polytope,
) -> Result<PolytopeResult, SeparationError> {
    if !hull_contains(polytope, x)? {
        return Err(SeparationError::MembershipViolation { polytope: 0 });
    }
    let samples = polytope_samples(ctx, t, polytope, DEFAULT_SAMPLE_RESOLUTION)?;
    let v = separate(ctx, t, polytope, &samples)?;
    let report = verify_separation(ctx, t, &v, &samples)?;
    Ok(PolytopeResult {
        generators: polytope.vertices().len(),
        passed: report.passed,
        normalized: Some(report.normalized),
        chord_residual: Some(report.chord_residual),
        samples_checked: report.samples_checked,
        violations: report.violations.len(),
        value: Some(v.value(x)),
        error: None,
    })
}

fn separation_instance(
    ctx: &RepresentationContext,
    x: &Lottery,
    t: f64,
    polytopes: &[Polytope],
) -> Result<InstanceResult, CliError> {
    let failed = |error: String| InstanceResult {
        x: x.clone(),
        t,
        engine_value: None,
        polytopes: Vec::new(),
        max_discrepancy: None,
        passed: false,
        error: Some(error),
    };
    let engine_value = match ctx.local_utility(x, t) {
        Ok(s) => s.v,
        Err(e) => {
            let e = SeparationError::from(e);
            return if is_property_failure(&e) { Ok(failed(tagged(&e))) } else { Err(e.into()) };
        }
    };
    let mut results = Vec::with_capacity(polytopes.len());
    for p in polytopes {
        match separate_on(ctx, x, t, p) {
            Ok(r) => results.push(r),
            Err(e) if is_property_failure(&e) => results.push(PolytopeResult {
                generators: p.vertices().len(),
                passed: false,
                normalized: None,
                chord_residual: None,
                samples_checked: 0,
                violations: 0,
                value: None,
                error: Some(tagged(&e)),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let values: Vec<f64> = results.iter().filter_map(|r| r.value).collect();
    let max_discrepancy = values.iter().map(|v| (v - engine_value).abs()).fold(0.0, f64::max);
    let passed = results.iter().all(|r| r.passed) && values.len() >= 3 && max_discrepancy <= CONSISTENCY_TOL;
    Ok(InstanceResult {
        x: x.clone(),
        t,
        engine_value: Some(engine_value),
        polytopes: results,
        max_discrepancy: Some(max_discrepancy),
        passed,
        error: None,
    })
}

fn separation(loaded: LoadedModel, resolution: usize, levels: &[f64], config: &Config) -> Result<Outcome, CliError> {
    if let Some(bad) = levels.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(CliError::Input(format!("separation level {bad} outside (0, 1)")));
    }
    let n = loaded.outcomes;
    let ctx = RepresentationContext::new(loaded.model, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut results = Vec::new();
    for x in lotteries(n, resolution)? {
        let polytopes = polytopes_for(&ctx, &x, &mut rng);
        for &t in levels {
            results.push(separation_instance(&ctx, &x, t, &polytopes)?);
        }
    }
    let mut failures = Vec::new();
    for r in results.iter().filter(|r| !r.passed) {
        let reason =
            r.error.clone().or_else(|| r.polytopes.iter().find_map(|p| p.error.clone())).unwrap_or_else(|| {
                match r.max_discrepancy {
                    Some(d) if d > CONSISTENCY_TOL => format!("discrepancy {d:e}"),
                    _ => "separator failed verification".into(),
                }
            });
        failures.push(format!("x = {:?}, t = {}: {reason}", r.x.probs(), r.t));
    }
    let max_discrepancy = results.iter().filter_map(|r| r.max_discrepancy).fold(0.0, f64::max);
    let summary = SeparationSummary {
        command: "separation",
        model: ctx.model().family(),
        grid: resolution,
        levels,
        seed: config.seed,
        sample_resolution: DEFAULT_SAMPLE_RESOLUTION,
        tolerance: CONSISTENCY_TOL,
        instances: results.len(),
        failed: failures.len(),
        max_discrepancy,
        passed: failures.is_empty(),
        results,
    };
    let path = config.out.join("separation.json");
    write_json(&path, &summary)?;
    Ok(Outcome { passed: summary.passed, files: vec![path], failures })
}
