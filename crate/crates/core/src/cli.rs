//! Batch command-line front end.
//!
//! Every command reads one series file (the JSON written by
//! [`SeriesJson`]), optionally carrying `"omega"` and `"tolerance"`, and
//! writes a JSON document or CSV table to `--output` or stdout.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::algebra::{FrequencyVector, Lattice, TruncatedSeries, C64};
use crate::asymptotic::{
    asymptotic_flow_explicit, asymptotic_flow_ode, grade, lambda_conjugacy, three_components, three_graded,
    three_system_integrate, GradedHamiltonian,
};
use crate::error::{Error, Result};
use crate::flow::{
    check_strip_invariance, normalizing_transform, rk4_oracle, rk4_oracle_checkpoints, solve_flow, Region,
};
use crate::io::{read_series, to_json_string, NormalJson, SeriesJson};
use crate::majorant::{burgers_radius, fit_inverse_law, geometric_majorant, radius_profile, radius_profile_csv};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Relative agreement required between the exact and RK4 paths in `check`.
pub const CHECK_RK4_TOLERANCE: f64 = 1e-6;
pub const CHECK_SYMMETRY_TOLERANCE: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// H(delta) in the original variables, plus the exact trajectories.
    Flow,
    /// The limit delta -> +inf as a series in the actions.
    NormalForm,
    /// The canonical change of variables at a single delta.
    Transform,
    /// The asymptotic system started from the input, and Lambda of the input.
    Asymptotic,
    /// The three-component system for input supported on {-q, 0, q} (RK4).
    ThreeSystem,
    /// Majorant-flow radius profile and the Burgers radius.
    Radius,
    /// Structural and symmetry checks along the flow.
    Check,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Flow => "flow",
            Command::NormalForm => "normal-form",
            Command::Transform => "transform",
            Command::Asymptotic => "asymptotic",
            Command::ThreeSystem => "three-system",
            Command::Radius => "radius",
            Command::Check => "check",
        }
    }
}

/// Comma-separated floats, e.g. `0.1,1,5`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl std::str::FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<std::result::Result<_, _>>()
            .map(FloatList)
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "normflow", version, about = "Normalization flow for Hamiltonian series")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    /// Series JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Truncation degree M (defaults to the file's).
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Comma-separated list of delta values.
    #[arg(long, global = true, default_value = "1")]
    pub delta: FloatList,
    /// RK4 steps (per run, or per unit of delta for `radius`).
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: Mode,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Comma-separated frequencies, overriding the file.
    #[arg(long, global = true)]
    pub omega: Option<FloatList>,
    /// Resonance tolerance, overriding the file.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Polydisk radius for `radius`.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub rho: f64,
}

impl JobSpec {
    fn deltas(&self) -> Vec<f64> {
        self.delta.0.clone()
    }
}

struct Loaded {
    seed: TruncatedSeries,
    freq: FrequencyVector,
}

fn load(job: &JobSpec) -> Result<Loaded> {
    let path = job.input.as_ref().ok_or_else(|| Error::Parse("--input is required".into()))?;
    let (seed, raw) = read_series(path)?;
    let m = job.degree.unwrap_or(seed.max_degree());
    if m < 3 {
        return Err(Error::InvalidParameter(format!("degree must be >= 3, got {m}")));
    }
    let seed = seed.with_max_degree(m).into_diamond()?;
    let omega = job
        .omega
        .as_ref()
        .map(|o| o.0.clone())
        .or(raw.omega)
        .ok_or_else(|| Error::InvalidParameter("no frequencies: pass --omega or put \"omega\" in the input".into()))?;
    let tol = job.tolerance.or(raw.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let freq = FrequencyVector::for_truncation(omega, tol, m)?;
    Ok(Loaded { seed, freq })
}

fn check_job(job: &JobSpec) -> Result<()> {
    let deltas = job.deltas();
    if deltas.is_empty() || deltas.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
        return Err(Error::InvalidParameter("every delta must be finite and >= 0".into()));
    }
    if job.steps == Some(0) {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    Ok(())
}

fn csv_header(n: usize, lead: &[&str], tail: &[&str]) -> String {
    let mut cols: Vec<String> = lead.iter().map(|s| s.to_string()).collect();
    cols.extend((1..=n).map(|j| format!("k{j}")));
    cols.extend((1..=n).map(|j| format!("kbar{j}")));
    cols.extend(tail.iter().map(|s| s.to_string()));
    cols.join(",") + "\n"
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn series_rows(out: &mut String, delta: f64, s: &TruncatedSeries) {
    for (k, c) in s.iter() {
        writeln!(out, "{},{},{},{},{}", join(&k.k_vec()), join(&k.kbar_vec()), delta, c.re, c.im).unwrap();
    }
}

fn run_flow(job: &JobSpec, l: &Loaded) -> Result<String> {
    let deltas = job.deltas();
    let (states, trajectories) = match job.mode {
        Mode::Exact => {
            let sol = solve_flow(&l.seed, &l.freq)?;
            sol.validate()?;
            (deltas.iter().map(|&d| sol.h_at(d)).collect::<Vec<_>>(), Some(sol.to_json()))
        }
        Mode::Rk4 => {
            let v = deltas.iter().map(|&d| rk4_oracle(&l.seed, &l.freq, d, job.steps)).collect::<Result<Vec<_>>>()?;
            (v, None)
        }
    };
    Ok(match job.format {
        Format::Json => {
            let results: Vec<_> =
                deltas.iter().zip(&states).map(|(d, s)| json!({"delta": d, "series": SeriesJson::from_series(s)})).collect();
            let mut doc = json!({
                "command": "flow",
                "mode": job.mode,
                "omega": l.freq.omega(),
                "tolerance": l.freq.resonance_tolerance(),
                "results": results,
            });
            if let Some(t) = trajectories {
                doc["trajectories"] = serde_json::to_value(t).expect("serialisable");
            }
            to_json_string(&doc)
        }
        Format::Csv => {
            let mut out = csv_header(l.seed.n(), &[], &["delta", "re", "im"]);
            for (d, s) in deltas.iter().zip(&states) {
                series_rows(&mut out, *d, s);
            }
            out
        }
    })
}

fn run_normal_form(job: &JobSpec, l: &Loaded) -> Result<String> {
    if job.mode == Mode::Rk4 {
        return Err(Error::InvalidParameter("the normal form is the delta -> +inf limit; use --mode exact".into()));
    }
    let sol = solve_flow(&l.seed, &l.freq)?;
    sol.validate()?;
    let nf = sol.normal_form()?;
    Ok(match job.format {
        Format::Json => to_json_string(&NormalJson::from_normal(&nf)),
        Format::Csv => {
            let mut out = (1..=nf.n()).map(|j| format!("l{j}")).collect::<Vec<_>>().join(",") + ",re,im\n";
            for (a, c) in nf.iter() {
                writeln!(out, "{},{},{}", join(&a.to_vec()), c.re, c.im).unwrap();
            }
            out
        }
    })
}

fn run_transform(job: &JobSpec, l: &Loaded) -> Result<String> {
    let deltas = job.deltas();
    if deltas.len() != 1 {
        return Err(Error::InvalidParameter("transform takes a single delta".into()));
    }
    if job.format == Format::Csv {
        return Err(Error::InvalidParameter("transform output is JSON only".into()));
    }
    let sol = solve_flow(&l.seed, &l.freq)?;
    let t = normalizing_transform(&sol, deltas[0], job.steps)?;
    let doc = json!({
        "transform": t.to_json(),
        "substitution_residual": t.substitution_residual(&sol)?,
        "symplectic_residual": t.symplectic_residual()?,
    });
    Ok(to_json_string(&doc))
}

fn graded_rows(out: &mut String, delta: f64, g: &GradedHamiltonian) {
    for (q, nq) in g.components() {
        for (a, c) in nq.iter() {
            writeln!(out, "{},{},{},{},{}", delta, join(q.as_slice()), join(&a.to_vec()), c.re, c.im).unwrap();
        }
    }
}

fn graded_header(n: usize) -> String {
    let mut cols = vec!["delta".to_string()];
    cols.extend((1..=n).map(|j| format!("q{j}")));
    cols.extend((1..=n).map(|j| format!("l{j}")));
    cols.push("re".into());
    cols.push("im".into());
    cols.join(",") + "\n"
}

fn default_rk4_steps(delta: f64) -> usize {
    ((200.0 * delta).ceil() as usize).max(1)
}

fn run_asymptotic(job: &JobSpec, l: &Loaded) -> Result<String> {
    let g0 = grade(&l.seed)?;
    let deltas = job.deltas();
    let states = deltas
        .iter()
        .map(|&d| match job.mode {
            Mode::Exact => asymptotic_flow_explicit(&g0, &l.freq, d),
            Mode::Rk4 => asymptotic_flow_ode(&g0, &l.freq, d, job.steps.unwrap_or_else(|| default_rk4_steps(d))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match job.format {
        Format::Json => {
            let lambda = lambda_conjugacy(&l.seed, &l.freq)?;
            let results: Vec<_> =
                deltas.iter().zip(&states).map(|(d, g)| json!({"delta": d, "graded": g.to_json()})).collect();
            to_json_string(&json!({
                "command": "asymptotic",
                "mode": job.mode,
                "lambda": SeriesJson::from_series(&lambda),
                "results": results,
            }))
        }
        Format::Csv => {
            let mut out = graded_header(l.seed.n());
            for (d, g) in deltas.iter().zip(&states) {
                graded_rows(&mut out, *d, g);
            }
            out
        }
    })
}

/// The `q` with `<omega, q> > 0` among the nonzero components.
fn three_direction(g: &GradedHamiltonian, freq: &FrequencyVector) -> Result<Lattice> {
    let mut qs: Vec<Lattice> = Vec::new();
    for q in g.components().keys().filter(|q| !q.is_zero()) {
        let p = if freq.sigma_omega(q)?.0 > 0 { *q } else { q.neg() };
        if !qs.contains(&p) {
            qs.push(p);
        }
    }
    match qs.as_slice() {
        [q] => Ok(*q),
        [] => Err(Error::Support("input has no component with q != 0".into())),
        _ => Err(Error::Support(format!("input has several directions {qs:?}"))),
    }
}

fn run_three(job: &JobSpec, l: &Loaded) -> Result<String> {
    let g0 = grade(&l.seed)?;
    let q = three_direction(&g0, &l.freq)?;
    let (nq, nmq, n0) = three_components(&g0, &q)?;
    let m = l.seed.max_degree();
    let n0 = n0.with_max_degree(m);
    let deltas = job.deltas();
    let states = deltas
        .iter()
        .map(|&d| {
            let steps = job.steps.unwrap_or_else(|| default_rk4_steps(d));
            three_system_integrate(&nq, &nmq, &n0, &q, &l.freq, d, steps).map(|s| three_graded(&s, &q, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match job.format {
        Format::Json => {
            let results: Vec<_> =
                deltas.iter().zip(&states).map(|(d, g)| json!({"delta": d, "graded": g.to_json()})).collect();
            to_json_string(&json!({"command": "three-system", "q": q.as_slice(), "results": results}))
        }
        Format::Csv => {
            let mut out = graded_header(l.seed.n());
            for (d, g) in deltas.iter().zip(&states) {
                graded_rows(&mut out, *d, g);
            }
            out
        }
    })
}

/// Parameters of `f'(zeta) = a' zeta^2 / (b - zeta)` dominating the
/// derivative of the geometric majorant `a rho zeta^s / (rho - zeta)`:
/// `b = rho / 2`, `a' = a s rho^{s-2} / 2^{s-2}`.
pub fn burgers_parameters(a: f64, s: u32, rho: f64) -> (f64, f64) {
    let e = s as i32 - 2;
    (a * s as f64 * rho.powi(e) / 2f64.powi(e), rho / 2.0)
}

fn run_radius(job: &JobSpec, l: &Loaded) -> Result<String> {
    let bar = l.seed.map_coeffs(|_, c| C64::new(c.norm(), 0.0));
    let mut deltas = job.deltas();
    deltas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rows = radius_profile(&bar, job.rho, &deltas, job.steps.unwrap_or(200))?;
    Ok(match job.format {
        Format::Csv => radius_profile_csv(&rows),
        Format::Json => {
            let g = geometric_majorant(&l.seed, job.rho)?;
            let (ab, bb) = burgers_parameters(g.a, g.s, job.rho);
            let rows_json = rows
                .iter()
                .map(|r| {
                    let burgers = burgers_radius(ab, bb, l.seed.n(), r.delta)?.radius;
                    Ok(json!({"delta": r.delta, "radius": r.radius, "norm": r.norm, "burgers_radius": burgers}))
                })
                .collect::<Result<Vec<_>>>()?;
            let fit = if rows.len() >= 2 {
                let f = fit_inverse_law(&rows)?;
                json!({"A": f.a, "B": f.b, "max_rel_residual": f.max_rel_residual})
            } else {
                serde_json::Value::Null
            };
            to_json_string(&json!({
                "command": "radius",
                "rho0": job.rho,
                "majorant": {"a": g.a, "s": g.s},
                "burgers": {"a": ab, "b": bb},
                "rows": rows_json,
                "fit": fit,
            }))
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    /// `None` when the check does not apply to this seed.
    pub passed: Option<bool>,
    pub detail: String,
}

impl CheckLine {
    fn new(name: &str, passed: Option<bool>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Runs every applicable check; the list is returned even when some fail.
pub fn run_checks(seed: &TruncatedSeries, freq: &FrequencyVector, deltas: &[f64]) -> Result<Vec<CheckLine>> {
    let sol = solve_flow(seed, freq)?;
    let mut lines = Vec::new();
    lines.push(match sol.validate() {
        Ok(()) => CheckLine::new("structure", Some(true), "exponents nonnegative, degree 3 constant"),
        Err(e) => CheckLine::new("structure", Some(false), e.to_string()),
    });
    lines.push(if sol.is_stationary() {
        CheckLine::new("stationary", Some(true), "fixed point: all trajectories constant")
    } else {
        CheckLine::new("stationary", None, "trajectories evolve")
    });
    let states: Vec<TruncatedSeries> = deltas.iter().map(|&d| sol.h_at(d)).collect();

    if seed.is_real(CHECK_SYMMETRY_TOLERANCE) {
        let worst = states.iter().map(|s| s.reality_defect()).fold(0.0, f64::max);
        lines.push(CheckLine::new("reality", Some(worst <= CHECK_SYMMETRY_TOLERANCE), format!("max defect {worst:e}")));
    } else {
        lines.push(CheckLine::new("reality", None, "seed is not real"));
    }
    for (plus, name) in [(true, "reversibility I+"), (false, "reversibility I-")] {
        if seed.max_abs_diff(&seed.involution(plus)) <= CHECK_SYMMETRY_TOLERANCE {
            let worst = states.iter().map(|s| s.max_abs_diff(&s.involution(plus))).fold(0.0, f64::max);
            lines.push(CheckLine::new(name, Some(worst <= CHECK_SYMMETRY_TOLERANCE), format!("max defect {worst:e}")));
        } else {
            lines.push(CheckLine::new(name, None, "seed is not invariant"));
        }
    }
    let strip = Region::Strip { lo: 0.0, hi: f64::INFINITY };
    if strip.supports(seed, freq) {
        let ok = check_strip_invariance(&sol, strip)?;
        lines.push(CheckLine::new("strip <omega,k'> >= 0", Some(ok), if ok { "invariant" } else { "left the strip" }));
    } else {
        lines.push(CheckLine::new("strip <omega,k'> >= 0", None, "seed not supported in the strip"));
    }

    let mut sorted = deltas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rk = rk4_oracle_checkpoints(seed, freq, &sorted, None)?;
    let mut worst: f64 = 0.0;
    for (d, r) in sorted.iter().zip(&rk) {
        let exact = sol.h_at(*d);
        let scale = exact.max_abs_coeff().max(f64::MIN_POSITIVE);
        worst = worst.max(exact.max_abs_diff(r) / scale);
    }
    lines.push(CheckLine::new("exact vs rk4", Some(worst <= CHECK_RK4_TOLERANCE), format!("max relative difference {worst:e}")));
    Ok(lines)
}

fn run_check(job: &JobSpec, l: &Loaded) -> Result<(String, bool)> {
    let lines = run_checks(&l.seed, &l.freq, &job.deltas())?;
    let ok = lines.iter().all(|c| c.passed != Some(false));
    let text = match job.format {
        Format::Json => to_json_string(&json!({"command": "check", "ok": ok, "checks": lines})),
        Format::Csv => {
            let mut out = String::from("name,passed,detail\n");
            for c in &lines {
                let p = c.passed.map_or("n/a".to_string(), |b| b.to_string());
                writeln!(out, "{},{},{}", c.name, p, c.detail.replace(',', ";")).unwrap();
            }
            out
        }
    };
    Ok((text, ok))
}

/// Result of a job: the output text and whether every check held.
pub fn execute(job: &JobSpec) -> Result<(String, bool)> {
    check_job(job)?;
    let l = load(job)?;
    let text = match job.command {
        Command::Flow => run_flow(job, &l)?,
        Command::NormalForm => run_normal_form(job, &l)?,
        Command::Transform => run_transform(job, &l)?,
        Command::Asymptotic => run_asymptotic(job, &l)?,
        Command::ThreeSystem => run_three(job, &l)?,
        Command::Radius => run_radius(job, &l)?,
        Command::Check => return run_check(job, &l),
    };
    Ok((text, true))
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("NORMFLOW_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(Error::InvalidParameter(format!("NORMFLOW_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}

/// Run a job, write its output, and return the process exit code:
/// 0 success, 1 parse error, 2 precondition, 3 internal structure.
pub fn run(job: &JobSpec) -> i32 {
    let result = thread_cap().and_then(|cap| match cap {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(|| execute(job)),
        None => execute(job),
    });
    match result {
        Ok((mut text, ok)) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &job.output {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if ok {
                0
            } else {
                eprintln!("error: {} reported failed checks", job.command.name());
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parse arguments and run; argument errors exit with 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match JobSpec::try_parse_from(args) {
        Ok(job) => run(&job),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
