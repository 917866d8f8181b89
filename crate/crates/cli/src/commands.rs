use std::fmt;
use std::fs;

use quatspec::random::{random_qmatrix, trial_rng};
use quatspec::resolvent::{
    residual_aq_commute, residual_as_identity, residual_mixed_eq, residual_q_commute, residual_q_eq,
    residual_resolvent_eq, Residual,
};
use quatspec::series::TraceRow;
use quatspec::spectrum::{
    cassini_boundary, convergence_ball, cor1_check, in_resolvent, oracle_check, real_resolvent_point,
    s_spectrum, sample_at_distance, sample_cassini_ball, OracleReport, SpectralSphere,
};
use quatspec::verify::{run_suite, IdentityResult, SuiteConfig};
use quatspec::{resolvent_bundle, series_init, Error, QMatrix, Quaternion, ResolventBundle, SeriesReport};
use serde::Serialize;

use crate::output::{emit, json, num, quat_cells, Csv};
use crate::{Cli, Command, Format, Opts};

/// Distance fraction of the convergence radius used when `--q` is absent.
const DEFAULT_SERIES_FRACTION: f64 = 0.5;
/// Ball samples are drawn in `U(q0, 0.99R)`.
const BALL_FRACTION: f64 = 0.99;
const BOUNDARY_POINTS: usize = 256;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or configuration (exit 2).
    Input(String),
    /// Verification or domain failure (exit 1).
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    let o = &cli.opts;
    if !(o.tol > 0.0) || !o.tol.is_finite() {
        return Err(CliError::Input(format!("--tol must be positive, got {}", o.tol)));
    }
    if o.n == Some(0) {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    match cli.command {
        Command::Spectrum => spectrum(o),
        Command::Resolvent => resolvent(o),
        Command::Series => series(o),
        Command::Cassini => cassini(o),
        Command::Verify => verify(o),
    }
}

fn load_matrix(o: &Opts) -> CliResult<Option<QMatrix>> {
    let Some(path) = &o.input else { return Ok(None) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let a: QMatrix =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Some(a))
}

fn require_matrix(o: &Opts) -> CliResult<QMatrix> {
    load_matrix(o)?.ok_or_else(|| CliError::Input("--input is required for this command".into()))
}

/// The input matrix, or a random one of size `--n` (default 4) drawn from `--seed`.
fn matrix_or_random(o: &Opts) -> CliResult<QMatrix> {
    match load_matrix(o)? {
        Some(a) => Ok(a),
        None => Ok(random_qmatrix(&mut trial_rng(o.seed, 0), o.n.unwrap_or(4))),
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    spheres: Vec<SpectralSphere>,
    oracle: OracleReport,
}

fn spectrum(o: &Opts) -> CliResult<()> {
    let a = require_matrix(o)?;
    let spec = s_spectrum(&a)?;
    let oracle = oracle_check(&a, &spec);
    let text = match o.format {
        Format::Json => json(&SpectrumReport { spheres: spec.spheres.clone(), oracle })?,
        Format::Csv => {
            let mut c = Csv::default();
            c.comment(format!("oracle max_sigma_on_spheres = {}", num(oracle.max_sigma_on_spheres)));
            c.comment(format!("oracle multiplicity_ok = {}", oracle.multiplicity_ok));
            c.row(["r", "s", "mult"].map(String::from));
            for s in &spec.spheres {
                c.row([num(s.r), num(s.s), s.mult.to_string()]);
            }
            c.finish()
        }
    };
    emit(&text, o.output.as_deref())?;
    if !oracle.multiplicity_ok || oracle.max_sigma_on_spheres > o.tol {
        return Err(CliError::Failure(format!(
            "spectrum oracle disagreement: normalized σ_min(Δ) on spheres {:e} (tol {:e}), multiplicities ok = {}",
            oracle.max_sigma_on_spheres, o.tol, oracle.multiplicity_ok
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct NamedResidual {
    identity: &'static str,
    abs: f64,
    relative: f64,
}

#[derive(Serialize)]
struct ResolventReport {
    #[serde(flatten)]
    bundle: ResolventBundle,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    residuals: Vec<NamedResidual>,
}

fn pair_residuals(a: &QMatrix, p: Quaternion, q: Quaternion) -> CliResult<Vec<NamedResidual>> {
    let named = |identity, r: Residual| NamedResidual { identity, abs: r.abs, relative: r.relative() };
    let (qpq, qqp) = residual_q_eq(a, p, q)?;
    let mut out = vec![
        named("resolvent_equation", residual_resolvent_eq(a, p, q)?),
        named("q_equation_pq", qpq),
        named("q_equation_qp", qqp),
    ];
    match residual_mixed_eq(a, p, q) {
        Ok(r) => out.push(named("mixed_equation", r)),
        Err(Error::DegenerateConfiguration(m)) => eprintln!("quatspec: mixed equation skipped: {m}"),
        Err(e) => return Err(e.into()),
    }
    out.push(named("as_identity", residual_as_identity(a, p)?));
    out.push(named("q_commute", residual_q_commute(a, p, q)?));
    out.push(named("aq_commute", residual_aq_commute(a, q)?));
    Ok(out)
}

fn resolvent(o: &Opts) -> CliResult<()> {
    let a = require_matrix(o)?;
    let q = o.q.ok_or_else(|| CliError::Input("--q is required".into()))?;
    let bundle = resolvent_bundle(&a, q)?;
    let residuals = match o.p {
        Some(p) => pair_residuals(&a, p, q)?,
        None => Vec::new(),
    };
    let failure = residuals.iter().find(|r| r.relative > o.tol).map(|bad| {
        format!("{} relative residual {:e} exceeds tol {:e}", bad.identity, bad.relative, o.tol)
    });
    let text = match o.format {
        Format::Json => json(&ResolventReport { bundle: bundle.clone(), residuals })?,
        Format::Csv => {
            let mut c = Csv::default();
            c.comment(format!("q = {}", quat_cells(q)));
            c.comment(format!("norm_Q = {}", num(bundle.norm_pseudo)));
            for r in &residuals {
                c.comment(format!("{} relative residual = {}", r.identity, num(r.relative)));
            }
            c.row(["operator", "i", "k", "w", "x", "y", "z"].map(String::from));
            c.matrix("Q", &bundle.pseudo);
            c.matrix("S_left", &bundle.s_left);
            c.matrix("S_right", &bundle.s_right);
            c.finish()
        }
    };
    emit(&text, o.output.as_deref())?;
    failure.map_or(Ok(()), |m| Err(CliError::Failure(m)))
}

#[derive(Serialize)]
struct SeriesOutput {
    #[serde(flatten)]
    report: SeriesReport,
    trace: Vec<TraceRow>,
}

fn series(o: &Opts) -> CliResult<()> {
    let a = matrix_or_random(o)?;
    let q0 = match o.q0 {
        Some(q0) => q0,
        None => real_resolvent_point(&a)?,
    };
    let st = series_init(&a, q0, o.nmax)?;
    let q = match o.q {
        Some(q) => q,
        None => sample_at_distance(&mut trial_rng(o.seed, 1), q0, DEFAULT_SERIES_FRACTION * st.radius),
    };
    // a stopping tolerance below --tol leaves room for the final comparison
    let report = st.report(q, 0.1 * o.tol)?;
    let trace = st.trace(q, report.n)?;
    let direct_norm = resolvent_bundle(&a, q)?.s_left.op_norm();
    let text = match o.format {
        Format::Json => json(&SeriesOutput { report, trace })?,
        Format::Csv => {
            let mut c = Csv::default();
            c.comment(format!("q0 = {}", quat_cells(report.q0)));
            c.comment(format!("q = {}", quat_cells(report.q)));
            c.comment(format!("R = {}", num(report.radius)));
            c.comment(format!("N = {}", report.n));
            c.comment(format!("converged = {}", report.converged));
            c.row(["N", "term_norm", "tail_bound", "residual_vs_direct"].map(String::from));
            for r in &trace {
                c.row([r.n.to_string(), num(r.term_norm), num(r.tail_bound), num(r.residual_vs_direct)]);
            }
            c.finish()
        }
    };
    emit(&text, o.output.as_deref())?;
    let relative = report.residual_vs_direct / direct_norm;
    if !report.converged || relative > o.tol {
        return Err(CliError::Failure(format!(
            "series residual {:e} relative to ‖S_q^-1‖ exceeds tol {:e} (converged = {}, N = {})",
            relative, o.tol, report.converged, report.n
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct CassiniReport {
    q0: Quaternion,
    u_dist: f64,
    #[serde(rename = "R")]
    radius: f64,
    samples: usize,
    inside: usize,
    boundary: Vec<Vec<(f64, f64)>>,
}

fn cassini(o: &Opts) -> CliResult<()> {
    let a = matrix_or_random(o)?;
    let q0 = match o.q0 {
        Some(q0) => q0,
        None => real_resolvent_point(&a)?,
    };
    let samples = o.trials.unwrap_or(100);
    let (u_dist, radius) = cor1_check(&a, q0)?;
    let ball = convergence_ball(&a, q0)?;
    let mut rng = trial_rng(o.seed, 2);
    let inside = (0..samples)
        .filter(|_| in_resolvent(&a, sample_cassini_ball(&mut rng, &ball, BALL_FRACTION)))
        .count();
    let boundary = cassini_boundary(&ball, BOUNDARY_POINTS);
    let report = CassiniReport { q0, u_dist, radius, samples, inside, boundary };
    let text = match o.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut c = Csv::default();
            c.comment(format!("q0 = {}", quat_cells(q0)));
            c.comment(format!("u_dist = {}", num(u_dist)));
            c.comment(format!("R = {}", num(radius)));
            c.comment(format!("ball samples in resolvent set = {inside}/{samples}"));
            c.row(["loop", "r", "s"].map(String::from));
            for (k, lp) in report.boundary.iter().enumerate() {
                for &(r, s) in lp {
                    c.row([k.to_string(), num(r), num(s)]);
                }
            }
            c.finish()
        }
    };
    emit(&text, o.output.as_deref())?;
    if u_dist < radius - 1e-10 {
        return Err(CliError::Failure(format!("u(q0, σ_S(A)) = {u_dist} is below R = {radius}")));
    }
    if inside < samples {
        return Err(CliError::Failure(format!("only {inside}/{samples} ball samples lie in the S-resolvent set")));
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    #[serde(flatten)]
    result: IdentityResult,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    n: usize,
    trials: usize,
    tol: f64,
    identities: Vec<VerifyRow>,
    pass: bool,
}

fn verify(o: &Opts) -> CliResult<()> {
    let cfg = SuiteConfig { n: o.n.unwrap_or(4), trials: o.trials.unwrap_or(50), seed: o.seed };
    if cfg.trials == 0 {
        return Err(CliError::Input("--trials must be at least 1".into()));
    }
    let results = run_suite(&cfg)?;
    let identities: Vec<VerifyRow> = results
        .into_iter()
        .map(|r| {
            let pass = r.max_relative <= o.tol;
            VerifyRow { result: r, pass }
        })
        .collect();
    let pass = identities.iter().all(|r| r.pass);
    let report = VerifyReport { seed: cfg.seed, n: cfg.n, trials: cfg.trials, tol: o.tol, identities, pass };
    let text = match o.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut c = Csv::default();
            c.comment(format!("seed = {}, n = {}, trials = {}, tol = {}", cfg.seed, cfg.n, cfg.trials, num(o.tol)));
            c.comment(format!("pass = {pass}"));
            c.row(["identity", "max_relative", "worst_trial", "pass"].map(String::from));
            for r in &report.identities {
                c.row([
                    r.result.identity.clone(),
                    num(r.result.max_relative),
                    r.result.worst_trial.to_string(),
                    r.pass.to_string(),
                ]);
            }
            c.finish()
        }
    };
    emit(&text, o.output.as_deref())?;
    let failing: Vec<String> = report
        .identities
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "{} (max relative residual {:e}, seed {}, instance {})",
                r.result.identity, r.result.max_relative, cfg.seed, r.result.worst_trial
            )
        })
        .collect();
    if !failing.is_empty() {
        return Err(CliError::Failure(format!("identities above tol {:e}: {}", o.tol, failing.join("; "))));
    }
    Ok(())
}
