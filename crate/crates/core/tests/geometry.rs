use deligne_lab::geometry::*;
use deligne_lab::poly::{all_roots, HomogeneousPoly, ParamForm, UniPoly};
use deligne_lab::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rc(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn cubic(terms: &[([u32; 3], f64)]) -> HomogeneousPoly {
    HomogeneousPoly::ternary(3, terms).unwrap()
}

fn fermat() -> HomogeneousPoly {
    cubic(&[([3, 0, 0], 1.0), ([0, 3, 0], 1.0), ([0, 0, 3], 1.0)])
}

fn nodal() -> HomogeneousPoly {
    // y²z - x²(x + z)
    cubic(&[([0, 2, 1], 1.0), ([3, 0, 0], -1.0), ([2, 0, 1], -1.0)])
}

fn random_cubic(rng: &mut ChaCha8Rng) -> HomogeneousPoly {
    let mut terms = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            terms.push((vec![a, b, 3 - a - b], rc(rng)));
        }
    }
    HomogeneousPoly::from_terms(3, 3, terms).unwrap()
}

/// A random cubic singular at `[0:0:1]`, pulled back by `M`.
fn random_nodal(rng: &mut ChaCha8Rng) -> (HomogeneousPoly, [[Complex64; 3]; 3]) {
    let mut terms = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            if a + b >= 2 {
                terms.push((vec![a, b, 3 - a - b], rc(rng)));
            }
        }
    }
    let g = HomogeneousPoly::from_terms(3, 3, terms).unwrap();
    let m = [[rc(rng), rc(rng), rc(rng)], [rc(rng), rc(rng), rc(rng)], [rc(rng), rc(rng), rc(rng)]];
    (g.linear_substitute(&m).unwrap(), m)
}

#[test]
fn legendre_fibers() {
    let fam = CurveFamily::legendre();
    let smooth = fam.fiber(c(2.0, 0.0)).unwrap();
    assert!(singular_locus(&smooth, DEFAULT_SINGULAR_TOL).unwrap().is_empty());
    let node = fam.fiber(c(0.0, 0.0)).unwrap();
    let sing = singular_locus(&node, DEFAULT_SINGULAR_TOL).unwrap();
    assert_eq!(sing.len(), 1);
    assert!(sing[0].approx_eq(&ProjPoint::real(0.0, 0.0, 1.0), 1e-8));
    let other = fam.fiber(c(1.0, 0.0)).unwrap();
    let sing = singular_locus(&other, DEFAULT_SINGULAR_TOL).unwrap();
    assert_eq!(sing.len(), 1);
    assert!(sing[0].approx_eq(&ProjPoint::real(1.0, 0.0, 1.0), 1e-8));
}

#[test]
fn constant_family_is_constant() {
    let dom = BaseDomain::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    let fam = CurveFamily::constant(&fermat(), dom).unwrap();
    let a = fam.fiber(c(0.2, 0.1)).unwrap();
    let b = fam.fiber(c(-0.7, 0.9)).unwrap();
    assert_eq!(a.curve, b.curve);
}

#[test]
fn family_validation() {
    let dom = BaseDomain::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    // s·x0 + x1: degree drops nowhere, but the form vanishes nowhere either
    let form = ParamForm::ternary(1, &[([1, 0, 0], &[0.0, 1.0]), ([0, 1, 0], &[1.0])]).unwrap();
    let fam = CurveFamily::new(form, dom, vec![]).unwrap();
    assert!(fam.fiber(c(0.5, 0.0)).is_ok());
    assert!(matches!(fam.fiber(c(5.0, 0.0)), Err(Error::Input { .. })));
    // s·x0 vanishes identically at s = 0
    let form = ParamForm::ternary(1, &[([1, 0, 0], &[0.0, 1.0])]).unwrap();
    let fam = CurveFamily::new(form, dom, vec![]).unwrap();
    assert!(matches!(fam.fiber(c(0.0, 0.0)), Err(Error::Flatness { .. })));
}

#[test]
fn classical_singular_loci() {
    assert!(singular_locus(&Fiber::standalone(fermat()), DEFAULT_SINGULAR_TOL)
        .unwrap()
        .is_empty());
    let s = singular_locus(&Fiber::standalone(nodal()), DEFAULT_SINGULAR_TOL).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].approx_eq(&ProjPoint::real(0.0, 0.0, 1.0), 1e-8));
}

#[test]
fn non_reduced_curves_rejected() {
    let x0 = HomogeneousPoly::variable(3, 0);
    let double_line = x0.pow(2);
    assert!(matches!(
        singular_locus(&Fiber::standalone(double_line), DEFAULT_SINGULAR_TOL),
        Err(Error::DegenerateInput { .. })
    ));
}

#[test]
fn random_smooth_and_nodal_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let f = Fiber::standalone(random_cubic(&mut rng));
        assert!(singular_locus(&f, DEFAULT_SINGULAR_TOL).unwrap().is_empty());
        assert!(gradient_resultant_test(&f).unwrap() > 1e-6);
    }
    for _ in 0..5 {
        let (g, m) = random_nodal(&mut rng);
        let f = Fiber::standalone(g);
        let s = singular_locus(&f, DEFAULT_SINGULAR_TOL).unwrap();
        assert_eq!(s.len(), 1, "{s:?}");
        // M p must be proportional to e2
        let p = s[0].coords();
        let mp: Vec<Complex64> = m.iter().map(|r| r[0] * p[0] + r[1] * p[1] + r[2] * p[2]).collect();
        assert!(mp[0].norm().max(mp[1].norm()) <= 1e-7 * mp[2].norm());
        assert!(gradient_resultant_test(&f).unwrap() < 1e-6);
    }
}

#[test]
fn generic_line_meets_cubic_three_times() {
    let fiber = CurveFamily::legendre().fiber(c(2.0, 0.0)).unwrap();
    let l = HomogeneousPoly::linear(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.7, -0.4)]);
    let d = intersect(&fiber, &l, DEFAULT_RESIDUAL_TOL).unwrap();
    assert_eq!(d.total, 3);
    assert_eq!(d.points.len(), 3);
    for (p, m) in &d.points {
        assert_eq!(*m, 1);
        assert!(p.residual(&fiber.curve) <= 1e-8);
        assert!(p.residual(&l) <= 1e-8);
    }
}

#[test]
fn flex_tangent_has_multiplicity_three() {
    // [1:-1:0] is a flex of the Fermat cubic with tangent x0 + x1 = 0
    let t = HomogeneousPoly::linear(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let d = intersect(&Fiber::standalone(fermat()), &t, DEFAULT_RESIDUAL_TOL).unwrap();
    assert_eq!(d.points.len(), 1);
    assert_eq!(d.points[0].1, 3);
    assert!(d.points[0].0.approx_eq(&ProjPoint::real(1.0, -1.0, 0.0), 1e-5));
}

#[test]
fn fermat_meets_x0_in_cube_roots() {
    let x0 = HomogeneousPoly::variable(3, 0);
    let d = intersect(&Fiber::standalone(fermat()), &x0, DEFAULT_RESIDUAL_TOL).unwrap();
    assert_eq!(d.points.len(), 3);
    // x1³ + x2³ = 0: [0 : 1 : -ζ] with ζ³ = 1
    for k in 0..3 {
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
        let q = ProjPoint::new([c(0.0, 0.0), c(1.0, 0.0), -zeta]).unwrap();
        assert!(d.points.iter().any(|(p, m)| *m == 1 && p.approx_eq(&q, 1e-10)));
    }
}

#[test]
fn bezout_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let f = Fiber::standalone(random_cubic(&mut rng));
        let g = random_cubic(&mut rng);
        let d = intersect(&f, &g, DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(d.total, 9);
    }
}

#[test]
fn intersection_is_frame_independent() {
    let fiber = CurveFamily::legendre().fiber(c(-0.5, 0.8)).unwrap();
    let l = HomogeneousPoly::linear(&[c(-0.6, 0.1), c(0.2, 0.4), c(0.5, 0.3)]);
    let a = intersect_with(&fiber, &l, &Projection::standard(), DEFAULT_RESIDUAL_TOL).unwrap();
    let b = intersect_with(&fiber, &l, &Projection::alternate(), DEFAULT_RESIDUAL_TOL).unwrap();
    assert_eq!(a.total, b.total);
    for (p, _) in &a.points {
        assert!(b.points.iter().any(|(q, _)| p.approx_eq(q, 1e-9)));
    }
}

#[test]
fn common_component_is_not_proper() {
    let x0 = HomogeneousPoly::variable(3, 0);
    let x1 = HomogeneousPoly::variable(3, 1);
    let reducible = x0.mul(&x1).unwrap();
    assert!(matches!(
        intersect(&Fiber::standalone(reducible), &x0, DEFAULT_RESIDUAL_TOL),
        Err(Error::NonProperIntersection { .. })
    ));
}

#[test]
fn branches_of_parabola() {
    // y² = x  as  y² - x z
    let f = Fiber::standalone(HomogeneousPoly::ternary(2, &[([0, 2, 0], 1.0), ([1, 0, 1], -1.0)]).unwrap());
    let b = branches(&f, Chart::Finite, c(1.0, 0.0), 1e-10).unwrap();
    assert!(!b.at_branch_point);
    let mut v: Vec<f64> = b.values.iter().map(|r| r.value.re).collect();
    v.sort_by(f64::total_cmp);
    assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    let b = branches(&f, Chart::Finite, c(0.0, 0.0), 1e-10).unwrap();
    assert!(b.at_branch_point);
    assert_eq!(b.values.len(), 1);
    assert_eq!(b.values[0].multiplicity, 2);
    assert!(b.values[0].value.norm() < 1e-10);
}

#[test]
fn legendre_branches_match_quadratic_formula() {
    let fiber = CurveFamily::legendre().fiber(c(2.0, 0.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let x = rc(&mut rng) * 2.0;
        let rhs = x * (x - 1.0) * (x - 2.0);
        let y = rhs.sqrt();
        let b = branches(&fiber, Chart::Finite, x, 1e-12).unwrap();
        assert_eq!(b.values.len(), 2);
        for want in [y, -y] {
            assert!(b.values.iter().any(|r| (r.value - want).norm() <= 1e-10 * (1.0 + want.norm())));
        }
    }
}

#[test]
fn cover_lifts_lie_on_the_curve() {
    let fiber = CurveFamily::legendre().fiber(c(0.5, 0.5)).unwrap();
    let cover = BranchedCover::new(&fiber, Projection::standard()).unwrap();
    assert_eq!(cover.sheets(), 3);
    let bps = cover.branch_points(Chart::Finite).unwrap();
    // discriminant degree d(d - 1) = 6 over both charts
    let inv = cover.branch_points(Chart::Inversion).unwrap();
    assert!(bps.len() + inv.len() >= 6);
    let mut out = Vec::new();
    cover.lift(Chart::Finite, c(0.3, -0.2), &mut out).unwrap();
    assert_eq!(out.len(), 3);
    for sp in &out {
        let p = ProjPoint::new(sp.point).unwrap();
        assert!(p.residual(&fiber.curve) < 1e-12);
    }
}

#[test]
fn discriminant_of_legendre_vanishes_at_nodal_values() {
    // the x-cubic x(x - 1)(x - s) has a double root exactly at s = 0, 1
    for s in [0.0, 1.0] {
        let p = UniPoly::from_real(&[0.0, s, -(1.0 + s), 1.0]);
        let r = all_roots(&p).unwrap();
        let close = r
            .iter()
            .enumerate()
            .any(|(i, a)| r[i + 1..].iter().any(|b| (a - b).norm() < 1e-6));
        assert!(close);
    }
}
