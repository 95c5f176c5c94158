//! C ABI over `deligne_lab`.
//!
//! Handles are opaque and owned by the caller; free them with the
//! matching `dl_*_free`. Every fallible call returns a [`DlStatus`]; on
//! failure `dl_last_error` describes it (per thread). Strings handed out
//! by the library are freed with [`dl_string_free`].

use deligne_lab::cli::{evaluate, RunConfig};
use deligne_lab::deligne::{pairing_norm, PairingInput};
use deligne_lab::geometry::CurveFamily;
use deligne_lab::integrate::QuadratureConfig;
use deligne_lab::metrics::HermitianBundle;
use deligne_lab::{Complex64, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes. The first four match the `dlab` exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    InvalidInput = 2,
    Numerical = 3,
    ThresholdExceeded = 4,
    NullPointer = 10,
    Utf8 = 11,
    Panic = 12,
}

/// A family of plane curves over a rectangle of the `s`-plane.
pub struct DlFamily(CurveFamily);

/// A hermitian line bundle `O(d)` with its metric.
pub struct DlBundle(HermitianBundle);

/// Quadrature settings.
pub struct DlQuadConfig(QuadratureConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> DlStatus {
    set_error(e.to_string());
    if e.is_validation() {
        DlStatus::InvalidInput
    } else {
        DlStatus::Numerical
    }
}

/// Runs `f`, turning panics into [`DlStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), DlStatus>) -> DlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            DlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, DlStatus> {
    if p.is_null() {
        set_error(format!("`{what}` is null"));
        return Err(DlStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("`{what}` is not UTF-8"));
        DlStatus::Utf8
    })
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, DlStatus> {
    serde_json::from_str(text).map_err(|e| {
        set_error(format!("invalid input `{what}`: {e}"));
        DlStatus::InvalidInput
    })
}

unsafe fn out<T>(p: *mut T, v: T, what: &str) -> Result<(), DlStatus> {
    if p.is_null() {
        set_error(format!("`{what}` is null"));
        return Err(DlStatus::NullPointer);
    }
    p.write(v);
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, DlStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(format!("`{what}` is null"));
        DlStatus::NullPointer
    })
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The Legendre family `y²z = x(x - z)(x - s z)`.
#[no_mangle]
pub extern "C" fn dl_family_legendre() -> *mut DlFamily {
    Box::into_raw(Box::new(DlFamily(CurveFamily::legendre())))
}

/// Parses a family from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_family_from_json(json: *const c_char, out_family: *mut *mut DlFamily) -> DlStatus {
    guard(|| {
        let fam: CurveFamily = parse(read_str(json, "json")?, "family")?;
        out(out_family, Box::into_raw(Box::new(DlFamily(fam))), "out_family")
    })
}

/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_family_free(f: *mut DlFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `O(degree)` with the Fubini–Study metric.
#[no_mangle]
pub extern "C" fn dl_bundle_fubini_study(degree: u32) -> *mut DlBundle {
    Box::into_raw(Box::new(DlBundle(HermitianBundle::fubini_study(degree))))
}

/// Parses a bundle (`{"degree": d, "weight": {...}}`) from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_bundle_from_json(json: *const c_char, out_bundle: *mut *mut DlBundle) -> DlStatus {
    guard(|| {
        let b: HermitianBundle = parse(read_str(json, "json")?, "bundle")?;
        b.validate("bundle").map_err(|e| status_of(&e))?;
        out(out_bundle, Box::into_raw(Box::new(DlBundle(b))), "out_bundle")
    })
}

/// # Safety
/// `b` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_bundle_free(b: *mut DlBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Default quadrature settings with the given tolerances.
#[no_mangle]
pub extern "C" fn dl_quad_config_new(rel_tol: f64, abs_tol: f64) -> *mut DlQuadConfig {
    Box::into_raw(Box::new(DlQuadConfig(QuadratureConfig::with_tolerance(rel_tol, abs_tol))))
}

/// # Safety
/// `c` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_quad_config_free(c: *mut DlQuadConfig) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `∫_{X_s} c_1(bundle)`, which equals `deg(X_s) · deg(bundle)`.
///
/// # Safety
/// Handles must be live; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn dl_fiber_mass(
    family: *const DlFamily,
    bundle: *const DlBundle,
    config: *const DlQuadConfig,
    s_re: f64,
    s_im: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> DlStatus {
    guard(|| {
        let fam = &handle(family, "family")?.0;
        let b = &handle(bundle, "bundle")?.0;
        let cfg = &handle(config, "config")?.0;
        let r = fam
            .fiber(Complex64::new(s_re, s_im))
            .and_then(|f| deligne_lab::integrate::fiber_integral(&f, &|_| 1.0, b, cfg))
            .map_err(|e| status_of(&e))?;
        out(out_value, r.value, "out_value")?;
        out(out_error, r.error_estimate, "out_error")
    })
}

/// `log ‖⟨l0, l1⟩‖(s)` for a pairing given as JSON (`family`, `bundle0`,
/// `bundle1`, `section0`, `section1`).
///
/// # Safety
/// `input_json` must be a NUL-terminated string; handles live; output
/// pointers writable.
#[no_mangle]
pub unsafe extern "C" fn dl_pairing_log_norm(
    input_json: *const c_char,
    config: *const DlQuadConfig,
    s_re: f64,
    s_im: f64,
    out_log_norm: *mut f64,
    out_error: *mut f64,
) -> DlStatus {
    guard(|| {
        let inp: PairingInput = parse(read_str(input_json, "input_json")?, "input")?;
        let cfg = &handle(config, "config")?.0;
        let r = pairing_norm(&inp, Complex64::new(s_re, s_im), cfg).map_err(|e| status_of(&e))?;
        out(out_log_norm, r.log_norm, "out_log_norm")?;
        out(out_error, r.quadrature.error_estimate, "out_error")
    })
}

/// Runs a full task config (the `dlab --config` format) and returns the
/// result document as JSON in `*out_json`. Nothing is written to disk;
/// family files are resolved against the working directory. Returns
/// [`DlStatus::ThresholdExceeded`] (with the document set) when an
/// identity defect exceeds its threshold.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out_json` writable.
/// Free the result with [`dl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn dl_run_task_json(config_json: *const c_char, out_json: *mut *mut c_char) -> DlStatus {
    let mut code = DlStatus::Ok;
    let st = guard(|| {
        let text = read_str(config_json, "config_json")?;
        let cfg = RunConfig::from_json(text).map_err(|e| status_of(&e))?;
        let p = evaluate(&cfg, Path::new(".")).map_err(|e| status_of(&e))?;
        let s = CString::new(p.record.to_string()).map_err(|_| {
            set_error("result contains NUL");
            DlStatus::Panic
        })?;
        out(out_json, s.into_raw(), "out_json")?;
        if p.exit_code == 4 {
            set_error(p.summary);
            code = DlStatus::ThresholdExceeded;
        }
        Ok(())
    });
    if st == DlStatus::Ok {
        code
    } else {
        st
    }
}
