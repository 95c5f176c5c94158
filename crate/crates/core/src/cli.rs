//! Task runner behind the `dlab` binary: one JSON config in, CSV and JSON
//! files out, an exit code and a short summary.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 an
//! identity defect above its declared threshold (or a failed suite
//! criterion).

use crate::deligne::{
    identity_defect, pairing_norm, polarization_exact, polarization_expand, polarization_numeric,
    projection_check, CoverTarget, FiniteCover, IdentityKind, IdentityReport, PairingInput,
    PairingNormResult, ProjectionCheck, MAX_POLARIZATION_N,
};
use crate::error::{Error, Result};
use crate::geometry::{CurveFamily, Fiber, ProjPoint};
use crate::integrate::{PhiSpec, QuadratureConfig, QuadratureResult};
use crate::metrics::HermitianBundle;
use crate::output::{self, PolarizationRow};
use crate::poly::HomogeneousPoly;
use crate::scan::{continuity_scan, oscillation_estimate, OscillationReport, ScanTask};
use crate::suite;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_THRESHOLD: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    FiberIntegral,
    PairingNorm,
    IdentityCheck,
    Polarization,
    ProjectionCheck,
    ContinuityScan,
    Suite,
}

impl TaskKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TaskKind::FiberIntegral => "fiber-integral",
            TaskKind::PairingNorm => "pairing-norm",
            TaskKind::IdentityCheck => "identity-check",
            TaskKind::Polarization => "polarization",
            TaskKind::ProjectionCheck => "projection-check",
            TaskKind::ContinuityScan => "continuity-scan",
            TaskKind::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// output directory, created if missing; `--out` takes precedence
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// file stem; defaults to the task kind
    #[serde(default)]
    pub stem: Option<String>,
}

/// Top-level config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: TaskKind,
    #[serde(default)]
    pub payload: serde_json::Value,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberIntegralTask {
    pub family: CurveFamily,
    pub phi: PhiSpec,
    pub bundle: HermitianBundle,
    pub base_points: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingNormTask {
    pub input: PairingInput,
    pub base_points: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityCheckTask {
    pub input: PairingInput,
    pub identity: IdentityKind,
    pub base_points: Vec<Complex64>,
    /// defects above this give exit code 4
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationTask {
    pub n: usize,
    /// explicit tuples of `n + 1` values
    #[serde(default)]
    pub tuples: Vec<Vec<f64>>,
    /// every integer tuple in `[-r, r]^{n+1}` (exact mode)
    #[serde(default)]
    pub grid_radius: Option<i64>,
    /// integer arithmetic; tuples must then hold integers
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    Curve(HomogeneousPoly),
    Point([Complex64; 3]),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionTask {
    pub source: HomogeneousPoly,
    pub target: TargetSpec,
    pub maps: [HomogeneousPoly; 3],
    pub declared_degree: usize,
    pub phi: PhiSpec,
    pub bundle: HermitianBundle,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteTask {
    pub name: String,
}

/// A parsed payload.
#[derive(Debug, Clone)]
pub enum Task {
    FiberIntegral(FiberIntegralTask),
    PairingNorm(PairingNormTask),
    IdentityCheck(IdentityCheckTask),
    Polarization(PolarizationTask),
    ProjectionCheck(ProjectionTask),
    ContinuityScan(ScanTask),
    Suite(SuiteTask),
}

/// What every task writes to `<stem>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<T> {
    pub task: TaskKind,
    pub quadrature: QuadratureConfig,
    pub results: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub oscillation: OscillationReport,
    pub extrapolated_limit: Option<f64>,
    pub uncertainty: Option<f64>,
    pub failed_points: usize,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    fn from_error(e: &Error) -> Self {
        RunOutcome {
            exit_code: if e.is_validation() {
                EXIT_INVALID
            } else {
                EXIT_NUMERICAL
            },
            summary: format!("error: {e}"),
            files: Vec::new(),
        }
    }
}

/// Built-in families usable as `"family": "<name>"`.
pub fn family_preset(name: &str) -> Option<CurveFamily> {
    match name {
        "legendre" => Some(CurveFamily::legendre()),
        "projective_line" => Some(CurveFamily::projective_line()),
        _ => None,
    }
}

/// Replaces `"family": "<preset or file>"` by the family's JSON; files
/// are resolved against `base_dir`.
fn resolve_families(v: &mut serde_json::Value, base_dir: &Path, path: &str) -> Result<()> {
    match v {
        serde_json::Value::Object(map) => {
            for (k, child) in map.iter_mut() {
                let here = format!("{path}.{k}");
                if k == "family" {
                    if let serde_json::Value::String(name) = child {
                        let fam = match family_preset(name) {
                            Some(f) => f,
                            None => {
                                let file = base_dir.join(&*name);
                                let text = std::fs::read_to_string(&file).map_err(|e| {
                                    Error::input(
                                        here.clone(),
                                        format!(
                                            "`{name}` is neither a preset nor a readable file: {e}"
                                        ),
                                    )
                                })?;
                                serde_json::from_str(&text)
                                    .map_err(|e| Error::input(here.clone(), e.to_string()))?
                            }
                        };
                        *child = serde_json::to_value(&fam)
                            .map_err(|e| Error::input(here.clone(), e.to_string()))?;
                        continue;
                    }
                }
                resolve_families(child, base_dir, &here)?;
            }
            Ok(())
        }
        serde_json::Value::Array(items) => {
            for (i, child) in items.iter_mut().enumerate() {
                resolve_families(child, base_dir, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn parse_payload<T: DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let p = e.path().to_string();
        let field = if p == "." {
            "payload".to_string()
        } else {
            format!("payload.{p}")
        };
        Error::input(field, e.into_inner().to_string())
    })
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let p = e.path().to_string();
            Error::input(if p == "." { "config".into() } else { p }, e.into_inner().to_string())
        })
    }

    /// Parses the payload for `self.task` and checks the quadrature config.
    pub fn parse_task(&self, base_dir: &Path) -> Result<Task> {
        self.quadrature.validate()?;
        let mut v = self.payload.clone();
        resolve_families(&mut v, base_dir, "payload")?;
        Ok(match self.task {
            TaskKind::FiberIntegral => Task::FiberIntegral(parse_payload(v)?),
            TaskKind::PairingNorm => Task::PairingNorm(parse_payload(v)?),
            TaskKind::IdentityCheck => Task::IdentityCheck(parse_payload(v)?),
            TaskKind::Polarization => Task::Polarization(parse_payload(v)?),
            TaskKind::ProjectionCheck => Task::ProjectionCheck(parse_payload(v)?),
            TaskKind::ContinuityScan => Task::ContinuityScan(parse_payload(v)?),
            TaskKind::Suite => Task::Suite(parse_payload(v)?),
        })
    }
}

fn need_points(points: &[Complex64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::input("payload.base_points", "empty"));
    }
    Ok(())
}

fn check_threshold(t: Option<f64>) -> Result<()> {
    match t {
        Some(t) if !(t.is_finite() && t >= 0.0) => Err(Error::input(
            "payload.threshold",
            format!("must be finite and non-negative, got {t}"),
        )),
        _ => Ok(()),
    }
}

fn run_polarization(t: &PolarizationTask) -> Result<Vec<PolarizationRow>> {
    if t.n > MAX_POLARIZATION_N {
        return Err(Error::input(
            "payload.n",
            format!("must be at most {MAX_POLARIZATION_N}"),
        ));
    }
    let terms = polarization_expand(t.n)?;
    let mut tuples: Vec<Vec<f64>> = t.tuples.clone();
    if let Some(r) = t.grid_radius {
        if !t.exact {
            return Err(Error::input("payload.grid_radius", "requires exact = true"));
        }
        let side = (2 * r + 1) as f64;
        if r < 0 || side.powi(t.n as i32 + 1) > 1e7 {
            return Err(Error::input("payload.grid_radius", "grid too large or negative"));
        }
        let mut cur = vec![-r; t.n + 1];
        loop {
            tuples.push(cur.iter().map(|&x| x as f64).collect());
            let mut k = 0;
            while k <= t.n && cur[k] == r {
                cur[k] = -r;
                k += 1;
            }
            if k > t.n {
                break;
            }
            cur[k] += 1;
        }
    }
    if tuples.is_empty() {
        return Err(Error::input("payload.tuples", "no tuples given"));
    }
    let mut rows = Vec::with_capacity(tuples.len());
    for (i, xs) in tuples.iter().enumerate() {
        if xs.len() != t.n + 1 {
            return Err(Error::input(
                format!("payload.tuples[{i}]"),
                format!("expected {} values, got {}", t.n + 1, xs.len()),
            ));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::input(format!("payload.tuples[{i}]"), "non-finite value"));
        }
        if t.exact {
            if xs.iter().any(|x| x.fract() != 0.0 || x.abs() > 1e6) {
                return Err(Error::input(
                    format!("payload.tuples[{i}]"),
                    "exact mode needs integers of magnitude at most 1e6",
                ));
            }
            let ints: Vec<i64> = xs.iter().map(|&x| x as i64).collect();
            let (l, r) = polarization_exact(&terms, &ints)
                .map_err(|e| Error::input(format!("payload.tuples[{i}]"), e.to_string()))?;
            rows.push(PolarizationRow {
                values: xs.clone(),
                lhs: l as f64,
                rhs: r as f64,
                defect: (l - r).unsigned_abs() as f64,
            });
        } else {
            let (l, r) = polarization_numeric(&terms, xs)?;
            let scale = l.abs().max(r.abs());
            rows.push(PolarizationRow {
                values: xs.clone(),
                lhs: l,
                rhs: r,
                defect: if scale > 0.0 { (l - r).abs() / scale } else { 0.0 },
            });
        }
    }
    Ok(rows)
}

fn projection_cover(t: &ProjectionTask) -> Result<FiniteCover> {
    let target = match &t.target {
        TargetSpec::Curve(c) => CoverTarget::Curve(Fiber::standalone(c.clone())),
        TargetSpec::Point(p) => CoverTarget::Point(
            ProjPoint::new(*p).ok_or_else(|| Error::input("payload.target.point", "zero vector"))?,
        ),
    };
    Ok(FiniteCover {
        source: Fiber::standalone(t.source.clone()),
        target,
        maps: t.maps.clone(),
        declared_degree: t.declared_degree,
    })
}

/// Results of a task before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Produced {
    pub table: output::CsvTable,
    /// the `<stem>.json` document
    pub record: serde_json::Value,
    pub summary: String,
    pub exit_code: i32,
}

fn produced<T: Serialize>(
    table: output::CsvTable,
    record: &T,
    summary: String,
    exit_code: i32,
) -> Result<Produced> {
    Ok(Produced {
        table,
        record: serde_json::to_value(record).map_err(|e| Error::input("output", e.to_string()))?,
        summary,
        exit_code,
    })
}

fn record<T>(cfg: &RunConfig, results: T) -> RunRecord<T> {
    RunRecord {
        task: cfg.task,
        quadrature: cfg.quadrature.clone(),
        results,
    }
}

/// Parses and runs a config without touching the file system (other
/// than family files it references).
pub fn evaluate(cfg: &RunConfig, base_dir: &Path) -> Result<Produced> {
    let task = cfg.parse_task(base_dir)?;
    execute(cfg, &task)
}

fn execute(cfg: &RunConfig, task: &Task) -> Result<Produced> {
    let q = &cfg.quadrature;
    match task {
        Task::FiberIntegral(t) => {
            need_points(&t.base_points)?;
            t.phi.validate()?;
            t.bundle.validate("payload.bundle")?;
            let mut rows: Vec<(Complex64, QuadratureResult)> = Vec::new();
            for &s in &t.base_points {
                let fiber = t.family.fiber(s)?;
                rows.push((s, t.phi.integrate(&fiber, &t.bundle, q)?));
            }
            let mut summary = String::new();
            for (s, r) in &rows {
                summary += &format!(
                    "s = {s}: {} (error estimate {:.2e}, {} cells)\n",
                    output::fmt_f64(r.value),
                    r.error_estimate,
                    r.cells
                );
            }
            produced(
                output::fiber_integral_table(&rows),
                &record(cfg, rows.clone()),
                summary,
                EXIT_OK,
            )
        }
        Task::PairingNorm(t) => {
            need_points(&t.base_points)?;
            let rows: Vec<PairingNormResult> = t
                .base_points
                .iter()
                .map(|&s| pairing_norm(&t.input, s, q))
                .collect::<Result<_>>()?;
            let mut summary = String::new();
            for r in &rows {
                summary += &format!(
                    "s = {}: log_norm {} (error estimate {:.2e})\n",
                    r.s,
                    output::fmt_f64(r.log_norm),
                    r.quadrature.error_estimate
                );
            }
            produced(
                output::pairing_table(&rows),
                &record(cfg, rows.clone()),
                summary,
                EXIT_OK,
            )
        }
        Task::IdentityCheck(t) => {
            need_points(&t.base_points)?;
            check_threshold(t.threshold)?;
            let rows: Vec<IdentityReport> = t
                .base_points
                .iter()
                .map(|&s| identity_defect(&t.identity, &t.input, s, q))
                .collect::<Result<_>>()?;
            let worst = rows.iter().map(|r| r.defect).fold(0.0, f64::max);
            let mut summary = String::new();
            for r in &rows {
                summary += &format!("{} at s = {}: defect {:.3e}\n", r.kind, r.s, r.defect);
            }
            let exit_code = match t.threshold {
                Some(th) if worst > th => {
                    summary += &format!("defect {worst:.3e} exceeds threshold {th:.3e}\n");
                    EXIT_THRESHOLD
                }
                _ => EXIT_OK,
            };
            produced(
                output::identity_table(&rows),
                &record(cfg, rows.clone()),
                summary,
                exit_code,
            )
        }
        Task::Polarization(t) => {
            check_threshold(t.threshold)?;
            let rows = run_polarization(t)?;
            let worst = rows.iter().map(|r| r.defect).fold(0.0, f64::max);
            let mut summary = format!(
                "n = {}: {} tuples, largest {} defect {:.3e}\n",
                t.n,
                rows.len(),
                if t.exact { "absolute" } else { "relative" },
                worst
            );
            let exit_code = match t.threshold {
                Some(th) if worst > th => {
                    summary += &format!("defect exceeds threshold {th:.3e}\n");
                    EXIT_THRESHOLD
                }
                _ => EXIT_OK,
            };
            produced(
                output::polarization_table(&rows),
                &record(cfg, rows.clone()),
                summary,
                exit_code,
            )
        }
        Task::ProjectionCheck(t) => {
            let cover = projection_cover(t)?;
            let r: ProjectionCheck = projection_check(&cover, &t.phi, &t.bundle, q)?;
            let summary = format!(
                "lhs {} rhs {} ratio {}\n",
                output::fmt_f64(r.lhs.value),
                r.rhs.as_ref().map_or("-".into(), |x| output::fmt_f64(x.value)),
                r.ratio.map_or("-".into(), output::fmt_f64)
            );
            produced(
                output::projection_table(&r),
                &record(cfg, r.clone()),
                summary,
                EXIT_OK,
            )
        }
        Task::ContinuityScan(t) => {
            let series = continuity_scan(t, q)?;
            let osc = oscillation_estimate(&series)?;
            let failed = series
                .finest()
                .map_or(0, |l| l.points.iter().filter(|p| p.value.is_none()).count());
            let s = ScanSummary {
                oscillation: osc,
                extrapolated_limit: series.extrapolated_limit,
                uncertainty: series.uncertainty,
                failed_points: failed,
            };
            let summary = format!(
                "oscillations {:?}\nlimit {} ± {:.2e}\nverdict {}\n",
                s.oscillation.oscillations,
                s.extrapolated_limit.map_or("-".into(), output::fmt_f64),
                s.uncertainty.unwrap_or(f64::NAN),
                s.oscillation.verdict
            );
            produced(
                output::scan_table(&series),
                &record(cfg, s),
                summary,
                EXIT_OK,
            )
        }
        Task::Suite(t) => {
            let report = suite::run_suite(&t.name)?;
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_THRESHOLD
            };
            produced(report.table(), &report, report.summary(), code)
        }
    }
}

fn output_dir(cfg_dir: Option<&Path>, opts: &RunOptions, base_dir: &Path) -> Result<PathBuf> {
    let dir = match (&opts.out_dir, cfg_dir) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) if d.is_relative() => base_dir.join(d),
        (None, Some(d)) => d.to_path_buf(),
        (None, None) => PathBuf::from("out"),
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::input("output.dir", format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

/// Runs a parsed config; `base_dir` resolves relative paths inside it.
pub fn run_config(cfg: &RunConfig, base_dir: &Path, opts: &RunOptions) -> RunOutcome {
    let go = || -> Result<(Produced, Vec<PathBuf>)> {
        let task = cfg.parse_task(base_dir)?;
        let stem = cfg.output.stem.clone().unwrap_or_else(|| cfg.task.as_str().to_string());
        if stem.is_empty() || stem.contains(['/', '\\']) {
            return Err(Error::input("output.stem", "must be a plain file name"));
        }
        let dir = output_dir(cfg.output.dir.as_deref(), opts, base_dir)?;
        let p = execute(cfg, &task)?;
        let csv = dir.join(format!("{stem}.csv"));
        let json = dir.join(format!("{stem}.json"));
        p.table.write(&csv)?;
        output::write_json(&json, &p.record)?;
        Ok((p, vec![csv, json]))
    };
    match go() {
        Ok((p, files)) => RunOutcome {
            exit_code: p.exit_code,
            summary: p.summary,
            files,
        },
        Err(e) => RunOutcome::from_error(&e),
    }
}

/// Reads and runs a config file.
pub fn run_file(path: &Path, opts: &RunOptions) -> RunOutcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return RunOutcome::from_error(&Error::input(
                "--config",
                format!("{}: {e}", path.display()),
            ))
        }
    };
    let cfg = match RunConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return RunOutcome::from_error(&e),
    };
    let base = path.parent().unwrap_or(Path::new("."));
    run_config(&cfg, base, opts)
}

/// Runs a named suite without a config file.
pub fn run_named_suite(name: &str, opts: &RunOptions) -> RunOutcome {
    let cfg = RunConfig {
        task: TaskKind::Suite,
        payload: serde_json::json!({ "name": name }),
        quadrature: QuadratureConfig::default(),
        output: OutputConfig {
            dir: None,
            stem: Some(format!("suite-{name}")),
        },
    };
    run_config(&cfg, Path::new("."), opts)
}
