//! Curated acceptance checks. Each criterion is a self-contained function
//! returning a [`CriterionResult`]; inputs are drawn from fixed seeds.

use crate::deligne::{
    identity_defect, pairing_norm, polarization_exact, polarization_expand, polarization_numeric,
    projection_check, CoverTarget, FiniteCover, IdentityKind, PairingInput,
};
use crate::error::{Error, Result};
use crate::geometry::{intersect, CurveFamily, Fiber, ProjPoint, DEFAULT_RESIDUAL_TOL};
use crate::integrate::{fiber_integral, log_norm_integral, PhiSpec, QuadratureConfig};
use crate::metrics::{HermitianBundle, Weight};
use crate::output::{fmt_f64, CsvTable};
use crate::poly::{HomogeneousPoly, ParamForm};
use crate::scan::{continuity_scan, oscillation_estimate, ScanPath, ScanQuantity, ScanTask, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

pub const ACCEPTANCE: [(u32, &str); 9] = [
    (1, "projective line closed forms"),
    (2, "bezout count on the legendre fiber"),
    (3, "symmetry"),
    (4, "multilinearity and change of metric"),
    (5, "polarization"),
    (6, "projection formula"),
    (7, "total mass invariance"),
    (8, "continuity scan"),
    (9, "error estimate honesty"),
];

/// Criteria in the `quick` suite.
pub const QUICK: [u32; 3] = [1, 2, 5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl CriterionResult {
    /// One line: `[PASS] 3 symmetry (1.2 s): ...`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {} ({:.1} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut s: String = self.criteria.iter().map(|c| c.line() + "\n").collect();
        let n = self.criteria.iter().filter(|c| c.passed).count();
        s += &format!("{n}/{} criteria passed\n", self.criteria.len());
        s
    }

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["id", "name", "passed", "seconds", "detail"]);
        for c in &self.criteria {
            t.push(vec![
                c.id.to_string(),
                c.name.clone(),
                c.passed.to_string(),
                fmt_f64(c.seconds),
                c.detail.clone(),
            ]);
        }
        t
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let ids: Vec<u32> = match name {
        "acceptance" => ACCEPTANCE.iter().map(|c| c.0).collect(),
        "quick" => QUICK.to_vec(),
        _ => {
            return Err(Error::input(
                "suite",
                format!("unknown suite `{name}` (known: acceptance, quick)"),
            ))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        criteria: ids.into_iter().map(run_criterion).collect(),
    })
}

/// Runs one criterion; an error inside it counts as a failure.
pub fn run_criterion(id: u32) -> CriterionResult {
    let name = ACCEPTANCE
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1)
        .to_string();
    let start = Instant::now();
    let mut m = BTreeMap::new();
    let out = match id {
        1 => closed_forms(&mut m),
        2 => bezout(&mut m),
        3 => symmetry(&mut m),
        4 => multilinear_and_metric(&mut m),
        5 => polarization(&mut m),
        6 => projection(&mut m),
        7 => mass_invariance(&mut m),
        8 => continuity(&mut m),
        9 => honesty(&mut m),
        _ => Err(Error::input("criterion", format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match out {
        Ok((ok, detail)) => (ok, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        seconds,
        detail,
        metrics: m,
    }
}

type Outcome = Result<(bool, String)>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn x(i: usize) -> HomogeneousPoly {
    HomogeneousPoly::variable(3, i)
}

fn random_line(rng: &mut ChaCha8Rng) -> HomogeneousPoly {
    let mut k = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    HomogeneousPoly::linear(&[k(), k(), k()])
}

fn legendre_at(s: Complex64) -> Result<Fiber> {
    CurveFamily::legendre().fiber(s)
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}

fn closed_forms(m: &mut BTreeMap<String, f64>) -> Outcome {
    let cfg = QuadratureConfig::default();
    let fs = HermitianBundle::fubini_study(1);
    let line = CurveFamily::projective_line();
    let fiber = line.fiber(c(0.0, 0.0))?;
    let inp = PairingInput::constant_sections(line, fs.clone(), fs.clone(), &x(0), &x(1))?;
    let (p, tp) = timed(|| pairing_norm(&inp, c(0.0, 0.0), &cfg))?;
    let (l, tl) = timed(|| log_norm_integral(&fiber, &fs, &fs, &x(1), &cfg))?;
    let (mass, tm) = timed(|| fiber_integral(&fiber, &|_| 1.0, &fs, &cfg))?;
    let e1 = (p.log_norm + 0.5).abs() / 0.5;
    let e2 = (l.value + 0.5).abs() / 0.5;
    let e3 = (mass.value - 1.0).abs();
    m.insert("pairing_log_norm".into(), p.log_norm);
    m.insert("log_norm_integral".into(), l.value);
    m.insert("mass".into(), mass.value);
    let tmax = tp.max(tl).max(tm);
    m.insert("max_seconds".into(), tmax);
    let ok = e1 <= 1e-5 && e2 <= 1e-5 && e3 <= 1e-6 && tmax < 10.0;
    Ok((
        ok,
        format!(
            "log_norm {:.10} (rel err {e1:.1e}), integral {:.10} (rel err {e2:.1e}), mass {:.12} (err {e3:.1e}), slowest {tmax:.2} s",
            p.log_norm, l.value, mass.value
        ),
    ))
}

fn bezout(m: &mut BTreeMap<String, f64>) -> Outcome {
    let t0 = Instant::now();
    let fiber = legendre_at(c(2.0, 0.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = random_line(&mut rng);
        let d = intersect(&fiber, &l, DEFAULT_RESIDUAL_TOL)?;
        let distinct = d.points.len() == 3 && d.points.iter().all(|(_, mult)| *mult == 1);
        let r = d
            .points
            .iter()
            .map(|(p, _)| p.residual(&fiber.curve).max(p.residual(&l)))
            .fold(0.0, f64::max);
        worst = worst.max(r);
        if !distinct || r > 1e-8 {
            bad += 1;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    m.insert("failures".into(), bad as f64);
    m.insert("worst_residual".into(), worst);
    Ok((
        bad == 0 && secs < 30.0,
        format!("{bad}/100 lines without 3 simple points, worst residual {worst:.1e}, {secs:.2} s"),
    ))
}

fn identity_cfg() -> QuadratureConfig {
    QuadratureConfig::with_tolerance(1e-7, 1e-9)
}

fn bump_bundle() -> HermitianBundle {
    HermitianBundle::new(
        1,
        Weight::CoordinateBump {
            index: 0,
            amplitude: 0.4,
        },
    )
}

fn symmetry(m: &mut BTreeMap<String, f64>) -> Outcome {
    let t0 = Instant::now();
    let cfg = identity_cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fs = HermitianBundle::fubini_study(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (l0, l1) = (random_line(&mut rng), random_line(&mut rng));
        let inp = PairingInput::constant_sections(
            CurveFamily::legendre(),
            fs.clone(),
            bump_bundle(),
            &l0,
            &l1,
        )?;
        let r = identity_defect(&IdentityKind::Symmetry, &inp, c(2.0, 0.0), &cfg)?;
        worst = worst.max(r.defect);
    }
    let secs = t0.elapsed().as_secs_f64();
    m.insert("worst_defect".into(), worst);
    Ok((
        worst <= 1e-3 && secs < 300.0,
        format!("worst defect {worst:.2e} over 10 pairs, {secs:.1} s"),
    ))
}

fn multilinear_and_metric(m: &mut BTreeMap<String, f64>) -> Outcome {
    let cfg = identity_cfg();
    let fs = HermitianBundle::fubini_study(1);
    let l0 = HomogeneousPoly::linear(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.7, -0.4)]);
    let l1 = HomogeneousPoly::linear(&[c(-0.6, 0.1), c(0.2, 0.4), c(0.5, 0.3)]);
    let l0p = HomogeneousPoly::linear(&[c(0.1, -0.4), c(0.8, 0.0), c(-0.2, 0.6)]);
    let linear_bump = HermitianBundle::new(
        1,
        Weight::LinearBump {
            coeffs: [c(0.2, 0.0), c(0.5, 0.5), c(-0.3, 0.1)],
            amplitude: -0.3,
        },
    );
    let inp = PairingInput::constant_sections(
        CurveFamily::legendre(),
        fs.clone(),
        bump_bundle(),
        &l0,
        &l1,
    )?;
    let cases: Vec<(&str, IdentityKind, f64)> = vec![
        (
            "multilinearity",
            IdentityKind::Multilinearity {
                section0_prime: ParamForm::constant(&l0p),
                bundle0_prime: bump_bundle(),
            },
            1e-3,
        ),
        (
            "change_of_metric_slot0",
            IdentityKind::ChangeOfMetric {
                slot: 0,
                bundle_prime: linear_bump.clone(),
            },
            1e-3,
        ),
        (
            "change_of_metric_slot1",
            IdentityKind::ChangeOfMetric {
                slot: 1,
                bundle_prime: linear_bump,
            },
            1e-3,
        ),
        (
            "constant_u",
            IdentityKind::ChangeOfMetric {
                slot: 1,
                bundle_prime: bump_bundle().shifted(0.3),
            },
            1e-5,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [c(2.0, 0.0), c(-0.5, 0.8)] {
        for (name, kind, tol) in &cases {
            let r = identity_defect(kind, &inp, s, &cfg)?;
            if *name == "constant_u" && !r.analytic {
                ok = false;
                parts.push("constant u not detected".to_string());
            }
            ok &= r.defect <= *tol;
            let key = format!("{name}@{}", s.re);
            let prev = m.get(&key).copied().unwrap_or(0.0);
            m.insert(key, prev.max(r.defect));
            parts.push(format!("{name} at {s}: {:.1e}", r.defect));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn polarization(m: &mut BTreeMap<String, f64>) -> Outcome {
    let t0 = Instant::now();
    let mut exact_bad = 0usize;
    let mut count = 0usize;
    for n in 0..=4usize {
        let terms = polarization_expand(n)?;
        let mut cur = vec![-3i64; n + 1];
        loop {
            let (l, r) = polarization_exact(&terms, &cur)?;
            count += 1;
            if l != r {
                exact_bad += 1;
            }
            let mut k = 0;
            while k <= n && cur[k] == 3 {
                cur[k] = -3;
                k += 1;
            }
            if k > n {
                break;
            }
            cur[k] += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for n in 0..=6usize {
        let terms = polarization_expand(n)?;
        for _ in 0..200 {
            let xs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (l, r) = polarization_numeric(&terms, &xs)?;
            worst = worst.max((l - r).abs() / l.abs().max(r.abs()));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    m.insert("exact_mismatches".into(), exact_bad as f64);
    m.insert("worst_relative".into(), worst);
    Ok((
        exact_bad == 0 && worst <= 1e-10 && secs < 5.0,
        format!(
            "{exact_bad}/{count} exact mismatches, worst numeric relative defect {worst:.1e}, {secs:.2} s"
        ),
    ))
}

fn projection(m: &mut BTreeMap<String, f64>) -> Outcome {
    let t0 = Instant::now();
    let cfg = identity_cfg();
    let fs = HermitianBundle::fubini_study(1);
    let line = Fiber::standalone(x(2));
    let phi = PhiSpec::LogNorm {
        bundle: fs.clone(),
        section: x(0),
    };
    let cover = FiniteCover {
        source: line.clone(),
        target: CoverTarget::Curve(line.clone()),
        maps: [x(0).pow(2), x(1).pow(2), x(2).pow(2)],
        declared_degree: 2,
    };
    let r = projection_check(&cover, &phi, &fs, &cfg)?;
    let ratio = r.ratio.unwrap_or(f64::NAN);
    let one = HomogeneousPoly::constant(3, c(1.0, 0.0));
    let point = FiniteCover {
        source: line,
        target: CoverTarget::Point(ProjPoint::real(1.0, 1.0, 1.0)),
        maps: [one.clone(), one.clone(), one],
        declared_degree: 1,
    };
    let p = projection_check(&point, &phi, &fs, &cfg)?;
    let secs = t0.elapsed().as_secs_f64();
    m.insert("ratio".into(), ratio);
    m.insert("point_lhs".into(), p.lhs.value);
    Ok((
        (ratio - 1.0).abs() <= 1e-4 && p.lhs.value.abs() <= 1e-8 && secs < 60.0,
        format!(
            "z^2 ratio {ratio:.10} (degree {:?}), point target lhs {:.1e}, {secs:.1} s",
            r.generic_degree, p.lhs.value
        ),
    ))
}

/// Twenty base points of the Legendre family; ten lie on the circle of
/// radius `1e-2` about the nodal value `0`.
pub fn mass_base_points() -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..10)
        .map(|k| Complex64::from_polar(1e-2, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / 10.0))
        .collect();
    v.extend([
        c(2.0, 0.0),
        c(-1.0, 0.0),
        c(0.5, 0.5),
        c(-1.5, -1.0),
        c(2.5, 1.5),
        c(0.5, 0.0),
        c(1.5, -0.5),
        c(-0.5, 1.5),
        c(1.0, 0.3),
        c(3.0, -2.0),
    ]);
    v
}

fn mass_invariance(m: &mut BTreeMap<String, f64>) -> Outcome {
    let cfg = QuadratureConfig::with_tolerance(1e-7, 1e-9);
    let fs = HermitianBundle::fubini_study(1);
    let mut worst: f64 = 0.0;
    let mut worst_at = c(0.0, 0.0);
    for s in mass_base_points() {
        let r = fiber_integral(&legendre_at(s)?, &|_| 1.0, &fs, &cfg)?;
        let e = (r.value - 3.0).abs();
        if e >= worst {
            worst = e;
            worst_at = s;
        }
    }
    m.insert("worst_error".into(), worst);
    Ok((
        worst <= 1e-4,
        format!("worst |mass - 3| = {worst:.1e} at s = {worst_at} over 20 points"),
    ))
}

/// The two approach paths to the nodal value `0` used by the scan check.
pub fn scan_paths() -> [ScanPath; 2] {
    [
        ScanPath {
            start: c(-1.0, 0.0),
            end: c(0.0, 0.0),
        },
        ScanPath {
            start: c(0.5, 1.0),
            end: c(0.0, 0.0),
        },
    ]
}

/// Generic-line log-norm integral and pairing norm on the Legendre family.
pub fn scan_quantities() -> Result<Vec<(&'static str, ScanQuantity)>> {
    let fs = HermitianBundle::fubini_study(1);
    let l0 = HomogeneousPoly::linear(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.7, -0.4)]);
    let l1 = HomogeneousPoly::linear(&[c(-0.6, 0.1), c(0.2, 0.4), c(0.5, 0.3)]);
    Ok(vec![
        (
            "log_norm_integral",
            ScanQuantity::FiberIntegral {
                family: CurveFamily::legendre(),
                phi: PhiSpec::LogNorm {
                    bundle: fs.clone(),
                    section: l0.clone(),
                },
                bundle: fs.clone(),
            },
        ),
        (
            "pairing_norm",
            ScanQuantity::PairingNorm {
                input: PairingInput::constant_sections(
                    CurveFamily::legendre(),
                    fs.clone(),
                    fs,
                    &l0,
                    &l1,
                )?,
            },
        ),
    ])
}

fn continuity(m: &mut BTreeMap<String, f64>) -> Outcome {
    let t0 = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, q) in scan_quantities()? {
        let mut limits = Vec::new();
        for (k, path) in scan_paths().into_iter().enumerate() {
            let task = ScanTask {
                quantity: q.clone(),
                path,
                levels: vec![8, 10, 12],
            };
            let series = continuity_scan(&task, &cfg)?;
            let osc = oscillation_estimate(&series)?;
            ok &= osc.verdict == Verdict::ConsistentWithContinuity;
            let (l, u) = match (series.extrapolated_limit, series.uncertainty) {
                (Some(l), Some(u)) => (l, u),
                _ => return Ok((false, format!("{name}: no extrapolated limit"))),
            };
            m.insert(format!("{name}.path{k}.limit"), l);
            m.insert(format!("{name}.path{k}.uncertainty"), u);
            for (j, o) in osc.oscillations.iter().enumerate() {
                m.insert(format!("{name}.path{k}.oscillation{j}"), *o);
            }
            parts.push(format!(
                "{name} path {k}: {} ratios {:?} limit {l:.9} ± {u:.1e}",
                osc.verdict,
                osc.ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
            ));
            limits.push((l, u));
        }
        let gap = (limits[0].0 - limits[1].0).abs();
        let agree = gap <= limits[0].1 + limits[1].1;
        m.insert(format!("{name}.limit_gap"), gap);
        ok &= agree;
        parts.push(format!("{name} limits differ by {gap:.1e}"));
    }
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 900.0;
    Ok((ok, parts.join("; ")))
}

/// Tasks with known values. Each entry is `(label, exact, value, estimate)`.
pub fn honesty_cases() -> Result<Vec<(String, f64, f64, f64)>> {
    let fs = HermitianBundle::fubini_study(1);
    let line = CurveFamily::projective_line();
    let p1 = line.fiber(c(0.0, 0.0))?;
    let weights = [
        ("zero", Weight::Zero),
        ("constant", Weight::Constant { value: 0.7 }),
        (
            "bump0",
            Weight::CoordinateBump {
                index: 0,
                amplitude: 0.5,
            },
        ),
        (
            "bump1",
            Weight::CoordinateBump {
                index: 1,
                amplitude: -0.3,
            },
        ),
        (
            "linear_bump",
            Weight::LinearBump {
                coeffs: [c(0.2, 0.0), c(0.5, 0.5), c(-0.3, 0.1)],
                amplitude: 0.6,
            },
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let lines: Vec<HomogeneousPoly> = (0..4).map(|_| random_line(&mut rng)).collect();
    let mut out = Vec::new();
    for tol in [1e-4, 1e-6, 1e-8] {
        let cfg = QuadratureConfig::with_tolerance(tol, tol * 1e-2);
        for (name, w) in &weights {
            let b = HermitianBundle::new(1, w.clone());
            let r = fiber_integral(&p1, &|_| 1.0, &b, &cfg)?;
            out.push((format!("P1 mass {name} tol {tol:e}"), 1.0, r.value, r.error_estimate));
        }
        for (k, l) in lines.iter().enumerate() {
            let a = (l.coeff(&[1, 0, 0]).norm_sqr() + l.coeff(&[0, 1, 0]).norm_sqr()).sqrt();
            let r = log_norm_integral(&p1, &fs, &fs, l, &cfg)?;
            out.push((
                format!("P1 log integral line {k} tol {tol:e}"),
                a.ln() - 0.5,
                r.value,
                r.error_estimate,
            ));
            let shifted = fs.shifted(0.25);
            let r = log_norm_integral(&p1, &fs, &shifted, l, &cfg)?;
            out.push((
                format!("P1 shifted log integral line {k} tol {tol:e}"),
                a.ln() - 0.75,
                r.value,
                r.error_estimate,
            ));
        }
        for k in 0..2 {
            let (a, b) = (&lines[2 * k], &lines[2 * k + 1]);
            let det = a.coeff(&[1, 0, 0]) * b.coeff(&[0, 1, 0]) - a.coeff(&[0, 1, 0]) * b.coeff(&[1, 0, 0]);
            let inp = PairingInput::constant_sections(line.clone(), fs.clone(), fs.clone(), a, b)?;
            let r = pairing_norm(&inp, c(0.0, 0.0), &cfg)?;
            out.push((
                format!("P1 pairing {k} tol {tol:e}"),
                det.norm().ln() - 0.5,
                r.log_norm,
                r.quadrature.error_estimate,
            ));
        }
        for (s, w) in [(c(2.0, 0.0), 0usize), (c(-0.5, 0.8), 2), (c(0.3, -1.2), 3)] {
            let b = HermitianBundle::new(1, weights[w].1.clone());
            let r = fiber_integral(&legendre_at(s)?, &|_| 1.0, &b, &cfg)?;
            out.push((format!("Legendre mass s={s} tol {tol:e}"), 3.0, r.value, r.error_estimate));
        }
    }
    Ok(out)
}

/// True error within ten estimates, with a rounding allowance of
/// `1e-13 max(1, |exact|)`.
pub fn honest(exact: f64, value: f64, estimate: f64) -> bool {
    (value - exact).abs() <= 10.0 * estimate + 1e-13 * exact.abs().max(1.0)
}

fn honesty(m: &mut BTreeMap<String, f64>) -> Outcome {
    let cases = honesty_cases()?;
    let bad: Vec<&(String, f64, f64, f64)> = cases
        .iter()
        .filter(|(_, e, v, est)| !honest(*e, *v, *est))
        .collect();
    let frac = 1.0 - bad.len() as f64 / cases.len() as f64;
    m.insert("honest_fraction".into(), frac);
    m.insert("cases".into(), cases.len() as f64);
    let mut detail = format!("{}/{} cases honest ({:.1}%)", cases.len() - bad.len(), cases.len(), 100.0 * frac);
    if let Some((name, e, v, est)) = bad.first() {
        detail += &format!(
            "; e.g. {name}: error {:.1e} vs estimate {est:.1e}",
            (v - e).abs()
        );
    }
    Ok((frac >= 0.95, detail))
}
