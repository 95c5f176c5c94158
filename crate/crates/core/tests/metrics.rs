use deligne_lab::geometry::{Chart, CurveFamily, ProjPoint};
use deligne_lab::metrics::*;
use deligne_lab::poly::HomogeneousPoly;
use deligne_lab::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rc(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rp(rng: &mut ChaCha8Rng) -> [Complex64; 3] {
    [rc(rng), rc(rng), rc(rng)]
}

fn bumpy() -> HermitianBundle {
    HermitianBundle::new(
        1,
        Weight::Sum {
            terms: vec![
                Weight::CoordinateBump { index: 1, amplitude: 0.4 },
                Weight::LinearBump {
                    coeffs: [c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0)],
                    amplitude: -0.25,
                },
            ],
        },
    )
}

#[test]
fn fubini_study_norm_values() {
    let b = HermitianBundle::fubini_study(1);
    let x0 = HomogeneousPoly::variable(3, 0);
    assert!((b.norm(&x0, &ProjPoint::real(1.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    let v = b.norm(&x0, &ProjPoint::real(1.0, 1.0, 1.0)).unwrap();
    assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    let b2 = HermitianBundle::fubini_study(2);
    let x0x1 = x0.mul(&HomogeneousPoly::variable(3, 1)).unwrap();
    let v = b2.norm(&x0x1, &ProjPoint::real(1.0, 1.0, 0.0)).unwrap();
    assert!((v - 0.5).abs() < 1e-15);
}

#[test]
fn log_norm_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let b = bumpy().tensor(&HermitianBundle::fubini_study(1));
    let l = HomogeneousPoly::linear(&rp(&mut rng)).mul(&HomogeneousPoly::linear(&rp(&mut rng))).unwrap();
    for _ in 0..20 {
        let p = rp(&mut rng);
        let lam = rc(&mut rng) * 3.0;
        let a = b.log_norm(&l, &p).unwrap();
        let q = p.map(|z| z * lam);
        let bb = b.log_norm(&l, &q).unwrap();
        assert!((a - bb).abs() < 1e-12, "{a} vs {bb}");
    }
}

#[test]
fn degree_mismatch_is_input_error() {
    let b = HermitianBundle::fubini_study(2);
    let x0 = HomogeneousPoly::variable(3, 0);
    assert!(matches!(b.log_norm(&x0, &[c(1.0, 0.0); 3]), Err(Error::Input { .. })));
    assert!(matches!(
        metric_ratio_u(&b, &HermitianBundle::fubini_study(1)),
        Err(Error::Input { .. })
    ));
}

#[test]
fn line_density_closed_form() {
    let b = HermitianBundle::fubini_study(1);
    for z in [c(0.0, 0.0), c(0.4, -1.3), c(5.0, 2.0)] {
        let p = [c(1.0, 0.0), z, c(0.0, 0.0)];
        let dp = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let want = 1.0 / (PI * (1.0 + z.norm_sqr()).powi(2));
        assert!((b.density(&p, &dp) - want).abs() <= 1e-14 * want);
    }
}

#[test]
fn constant_weight_leaves_density_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let b = HermitianBundle::fubini_study(2);
    let s = b.shifted(1.7);
    for _ in 0..10 {
        let (p, dp) = (rp(&mut rng), rp(&mut rng));
        assert_eq!(b.density(&p, &dp), s.density(&p, &dp));
    }
}

#[test]
fn analytic_hessian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let w = bumpy().weight;
    for _ in 0..10 {
        let p = rp(&mut rng);
        let v = rp(&mut rng);
        let exact = w.levi(&p, &v);
        let fd = levi_fd(&|q: &[Complex64; 3]| w.value(q), &p, &v);
        assert!((exact - fd).abs() <= 1e-5 * (1.0 + exact.abs()), "{exact} vs {fd}");
        let h = w.hessian(&p).unwrap();
        let hfd = hessian_fd(&|q: &[Complex64; 3]| w.value(q), &p);
        assert!((levi_from_hessian(&h, &v) - levi_from_hessian(&hfd, &v)).abs() <= 1e-5 * (1.0 + exact.abs()));
    }
}

#[test]
fn custom_weight_without_hessian_uses_fd() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let custom = Weight::custom("bump", |p: &[Complex64; 3]| {
        0.4 * p[1].norm_sqr() / p.iter().map(|z| z.norm_sqr()).sum::<f64>()
    });
    let named = Weight::CoordinateBump { index: 1, amplitude: 0.4 };
    for _ in 0..10 {
        let (p, v) = (rp(&mut rng), rp(&mut rng));
        assert!((custom.levi(&p, &v) - named.levi(&p, &v)).abs() <= 1e-5 * (1.0 + named.levi(&p, &v).abs()));
    }
    assert!(!custom.is_serializable());
}

#[test]
fn metric_ratio_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let b = bumpy();
    let same = metric_ratio_u(&b, &b).unwrap();
    let shifted = metric_ratio_u(&b, &b.shifted(0.6)).unwrap();
    let other = HermitianBundle::fubini_study(1);
    let u = metric_ratio_u(&b, &other).unwrap();
    let l = HomogeneousPoly::linear(&rp(&mut rng));
    for _ in 0..10 {
        let p = rp(&mut rng);
        assert_eq!(same.eval(&p), 0.0);
        assert!((shifted.eval(&p) + 0.6).abs() < 1e-15);
        // u = log ‖l‖' − log ‖l‖
        let diff = other.log_norm(&l, &p).unwrap() - b.log_norm(&l, &p).unwrap();
        assert!((u.eval(&p) - diff).abs() < 1e-12);
    }
}

#[test]
fn density_on_a_fiber_integrates_like_fs() {
    // on the fiber, the chart density is positive away from branch points
    let fiber = CurveFamily::legendre().fiber(c(2.0, 0.0)).unwrap();
    let b = HermitianBundle::fubini_study(1);
    let x = c(0.5, 0.3);
    let rhs = x * (x - 1.0) * (x - 2.0);
    let y = rhs.sqrt();
    let d = curvature_density(&b, &fiber, Chart::Finite, x, y).unwrap();
    assert!(d > 0.0);
    // at a branch point the density is flagged
    assert!(curvature_density(&b, &fiber, Chart::Finite, c(1.0, 0.0), c(0.0, 0.0)).is_none());
}

#[test]
fn weight_json_round_trip() {
    let b = bumpy();
    let text = serde_json::to_string(&b).unwrap();
    let back: HermitianBundle = serde_json::from_str(&text).unwrap();
    let p = [c(0.3, 0.1), c(1.0, -0.2), c(0.4, 0.4)];
    assert_eq!(b.weight.value(&p), back.weight.value(&p));
    let bad: HermitianBundle = serde_json::from_str(r#"{"degree": 1, "weight": {"name": "coordinate_bump", "index": 5, "amplitude": 1}}"#).unwrap();
    assert!(matches!(bad.validate("bundle"), Err(Error::Input { .. })));
}
