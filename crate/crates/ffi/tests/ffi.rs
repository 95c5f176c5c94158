use deligne_lab_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    let p = dl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn legendre_mass_is_three() {
    let fam = dl_family_legendre();
    let b = dl_bundle_fubini_study(1);
    let cfg = dl_quad_config_new(1e-7, 1e-9);
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe { dl_fiber_mass(fam, b, cfg, 2.0, 0.0, &mut v, &mut e) };
    assert_eq!(st, DlStatus::Ok);
    assert!((v - 3.0).abs() < 1e-6, "{v}");
    assert!(e >= 0.0);
    assert!(dl_last_error().is_null());
    unsafe {
        dl_family_free(fam);
        dl_bundle_free(b);
        dl_quad_config_free(cfg);
    }
}

#[test]
fn singular_fiber_is_invalid_input() {
    let fam = dl_family_legendre();
    let b = dl_bundle_fubini_study(1);
    let cfg = dl_quad_config_new(1e-7, 1e-9);
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe { dl_fiber_mass(fam, b, cfg, 0.0, 0.0, &mut v, &mut e) };
    assert_eq!(st, DlStatus::InvalidInput);
    assert!(last_error().contains("degenerate"), "{}", last_error());
    unsafe {
        dl_family_free(fam);
        dl_bundle_free(b);
        dl_quad_config_free(cfg);
    }
}

#[test]
fn null_handles_are_reported() {
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe { dl_fiber_mass(ptr::null(), ptr::null(), ptr::null(), 2.0, 0.0, &mut v, &mut e) };
    assert_eq!(st, DlStatus::NullPointer);
    assert!(last_error().contains("family"));
    unsafe {
        dl_family_free(ptr::null_mut());
        dl_string_free(ptr::null_mut());
    }
}

#[test]
fn bundle_json_validation() {
    let mut b = ptr::null_mut();
    let good = CString::new(r#"{"degree": 1, "weight": {"name": "constant", "value": 0.5}}"#).unwrap();
    assert_eq!(unsafe { dl_bundle_from_json(good.as_ptr(), &mut b) }, DlStatus::Ok);
    assert!(!b.is_null());
    unsafe { dl_bundle_free(b) };
    let bad = CString::new(r#"{"degree": 1, "weight": {"name": "nope"}}"#).unwrap();
    let mut b2 = ptr::null_mut();
    assert_eq!(unsafe { dl_bundle_from_json(bad.as_ptr(), &mut b2) }, DlStatus::InvalidInput);
    assert!(b2.is_null());
    assert!(last_error().contains("bundle"));
}

const PAIRING: &str = r#"{
  "family": {"form": {"degree": 1, "terms": [{"exp": [0, 0, 1], "coeffs": [[1, 0]]}]},
             "base_domain": {"re_min": -1, "re_max": 1, "im_min": -1, "im_max": 1}},
  "bundle0": {"degree": 1}, "bundle1": {"degree": 1},
  "section0": {"degree": 1, "terms": [{"exp": [1, 0, 0], "coeffs": [[1, 0]]}]},
  "section1": {"degree": 1, "terms": [{"exp": [0, 1, 0], "coeffs": [[1, 0]]}]}
}"#;

#[test]
fn projective_line_pairing() {
    let inp = CString::new(PAIRING).unwrap();
    let cfg = dl_quad_config_new(1e-8, 1e-10);
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe { dl_pairing_log_norm(inp.as_ptr(), cfg, 0.0, 0.0, &mut v, &mut e) };
    assert_eq!(st, DlStatus::Ok);
    assert!((v + 0.5).abs() < 1e-6, "{v}");
    unsafe { dl_quad_config_free(cfg) };
}

#[test]
fn run_task_returns_json() {
    let cfg = CString::new(format!(
        r#"{{"task": "pairing-norm", "payload": {{"input": {PAIRING}, "base_points": [[0, 0]]}}}}"#
    ))
    .unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { dl_run_task_json(cfg.as_ptr(), &mut out) };
    assert_eq!(st, DlStatus::Ok, "{:?}", dl_last_error());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { dl_string_free(out) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["task"], "pairing-norm");
    let ln = v["results"][0]["log_norm"].as_f64().unwrap();
    assert!((ln + 0.5).abs() < 1e-6);
}

#[test]
fn run_task_threshold() {
    let cfg = CString::new(
        r#"{"task": "polarization", "payload": {"n": 2, "tuples": [[0.3, -1.2, 2.5]], "threshold": -1}}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dl_run_task_json(cfg.as_ptr(), &mut out) }, DlStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains("threshold"));
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(dl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles as C when a compiler is around.
#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/deligne_lab.h");
    assert!(std::path::Path::new(header).exists());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("t.c");
    std::fs::write(
        &src,
        format!("#include \"{header}\"\nint main(void) {{ return DL_STATUS_OK; }}\n"),
    )
    .unwrap();
    match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&src)
        .status()
    {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}
