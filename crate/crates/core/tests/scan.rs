use deligne_lab::geometry::{BaseDomain, CurveFamily};
use deligne_lab::integrate::{PhiSpec, QuadratureConfig};
use deligne_lab::metrics::HermitianBundle;
use deligne_lab::poly::HomogeneousPoly;
use deligne_lab::scan::*;
use deligne_lab::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::with_tolerance(1e-7, 1e-9)
}

fn mass_task(family: CurveFamily, start: Complex64, end: Complex64, levels: Vec<u32>) -> ScanTask {
    ScanTask {
        quantity: ScanQuantity::FiberIntegral {
            family,
            phi: PhiSpec::Constant { value: 1.0 },
            bundle: HermitianBundle::fubini_study(1),
        },
        path: ScanPath { start, end },
        levels,
    }
}

fn fermat() -> HomogeneousPoly {
    HomogeneousPoly::ternary(3, &[([3, 0, 0], 1.0), ([0, 3, 0], 1.0), ([0, 0, 3], 1.0)]).unwrap()
}

#[test]
fn grid_points() {
    assert_eq!(grid_t(0), 0.0);
    assert_eq!(grid_t(1), 0.5);
    assert_eq!(grid_t(3), 0.875);
}

#[test]
fn constant_family_has_no_oscillation() {
    let dom = BaseDomain::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let fam = CurveFamily::constant(&fermat(), dom).unwrap();
    let task = mass_task(fam, c(-1.0, 0.0), c(1.0, 0.5), vec![2, 3, 4]);
    let series = continuity_scan(&task, &cfg()).unwrap();
    let rep = oscillation_estimate(&series).unwrap();
    assert!(rep.oscillations.iter().all(|o| *o == 0.0));
    assert_eq!(rep.verdict, Verdict::ConsistentWithContinuity);
}

#[test]
fn legendre_mass_stays_three_towards_the_node() {
    let task = mass_task(CurveFamily::legendre(), c(-1.0, 0.0), c(0.0, 0.0), vec![2, 3, 4]);
    let series = continuity_scan(&task, &cfg()).unwrap();
    let finest = series.finest().unwrap();
    assert_eq!(finest.points.len(), 5);
    for p in &finest.points {
        let v = p.value.unwrap();
        assert!((v - 3.0).abs() < 1e-5, "t = {}: {v}", p.t);
        assert!((p.s - task.path.at(p.t)).norm() == 0.0);
    }
    assert!((series.extrapolated_limit.unwrap() - 3.0).abs() < 1e-5);
}

#[test]
fn scans_are_deterministic() {
    let task = mass_task(CurveFamily::legendre(), c(-1.0, 0.0), c(0.0, 0.0), vec![2, 3, 4]);
    let a = continuity_scan(&task, &cfg()).unwrap();
    let b = continuity_scan(&task, &cfg()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn path_through_a_node_is_an_error() {
    // s = 1 is reached at t = 1/2
    let task = mass_task(CurveFamily::legendre(), c(0.5, 0.0), c(1.5, 0.0), vec![2, 3, 4]);
    match continuity_scan(&task, &cfg()) {
        Err(Error::Path { t, .. }) => assert_eq!(t, 0.5),
        other => panic!("expected a path error, got {other:?}"),
    }
}

#[test]
fn task_validation() {
    let fam = CurveFamily::legendre;
    for task in [
        mass_task(fam(), c(-1.0, 0.0), c(-1.0, 0.0), vec![2, 3, 4]),
        mass_task(fam(), c(-1.0, 0.0), c(0.0, 0.0), vec![8, 10]),
        mass_task(fam(), c(-1.0, 0.0), c(0.0, 0.0), vec![8, 8, 10]),
        mass_task(fam(), c(-1.0, 0.0), c(0.0, 0.0), vec![8, 10, 50]),
        mass_task(fam(), c(-100.0, 0.0), c(0.0, 0.0), vec![2, 3, 4]),
    ] {
        assert!(matches!(continuity_scan(&task, &cfg()), Err(Error::Input { .. })), "{task:?}");
    }
}

#[test]
fn synthetic_series_verdicts() {
    let smooth = ScanSeries::synthetic(&DEFAULT_LEVELS, |t| ((1.0 - t).sqrt(), 0.0));
    let r = oscillation_estimate(&smooth).unwrap();
    assert_eq!(r.verdict, Verdict::ConsistentWithContinuity);
    assert!(r.ratios.iter().all(|q| (q - 2.0).abs() < 1e-6));
    // Aitken recovers the limit of a geometric tail
    let lim = smooth.extrapolated_limit.unwrap();
    assert!(lim.abs() <= smooth.uncertainty.unwrap());

    let jumpy = ScanSeries::synthetic(&DEFAULT_LEVELS, |t| ((1.0 / (1.0 - t)).ln().sin(), 0.0));
    assert_eq!(oscillation_estimate(&jumpy).unwrap().verdict, Verdict::Inconclusive);

    let noisy = ScanSeries::synthetic(&DEFAULT_LEVELS, |t| (1.0 + 1e-9 * (t * 1e4).sin(), 1e-9));
    assert_eq!(oscillation_estimate(&noisy).unwrap().verdict, Verdict::ConsistentWithContinuity);

    let short = ScanSeries::synthetic(&[8, 10], |t| (t, 0.0));
    assert!(matches!(oscillation_estimate(&short), Err(Error::Input { .. })));
}

#[test]
fn lipschitz_on_sampled_levels() {
    let f = |t: f64| (t, (3.0 * t).sin(), 1e-12);
    let coarse: Vec<_> = (0..=8).map(|k| f(k as f64 / 8.0)).collect();
    let fine: Vec<_> = (0..=64).map(|k| f(k as f64 / 64.0)).collect();
    assert!(lipschitz_check(&[coarse.clone(), fine]).unwrap().passed);
    let steep: Vec<_> = (0..=64)
        .map(|k| {
            let t = k as f64 / 64.0;
            (t, if t > 0.5 { 10.0 } else { 0.0 }, 1e-12)
        })
        .collect();
    assert!(!lipschitz_check(&[coarse.clone(), steep]).unwrap().passed);
    assert!(lipschitz_check(&[coarse]).is_err());
}

#[test]
fn sample_path_matches_scan_points() {
    let task = mass_task(CurveFamily::legendre(), c(-1.0, 0.0), c(0.0, 0.0), vec![2, 3, 4]);
    let s = sample_path(&task, &[0.0, 0.5], &cfg()).unwrap();
    let series = continuity_scan(&task, &cfg()).unwrap();
    let pts = &series.finest().unwrap().points;
    assert_eq!(s[0].1, pts[0].value.unwrap());
    assert_eq!(s[1].1, pts[1].value.unwrap());
}

#[test]
fn task_json_layout() {
    let text = r#"{
        "quantity": "fiber_integral",
        "family": {"form": {"degree": 1, "terms": [{"exp": [0, 0, 1], "coeffs": [[1, 0]]}]},
                   "base_domain": {"re_min": -1, "re_max": 1, "im_min": -1, "im_max": 1}},
        "phi": {"kind": "constant", "value": 1},
        "bundle": {"degree": 1},
        "path": {"start": [-0.5, 0], "end": [0.5, 0]}
    }"#;
    let task: ScanTask = serde_json::from_str(text).unwrap();
    assert_eq!(task.levels, DEFAULT_LEVELS.to_vec());
    task.validate().unwrap();
}
