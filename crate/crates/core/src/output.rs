//! CSV and JSON writers. Floats carry 17 significant digits.

use crate::deligne::{IdentityReport, PairingNormResult, ProjectionCheck};
use crate::error::{Error, Result};
use crate::integrate::QuadratureResult;
use crate::scan::ScanSeries;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// `x` in scientific notation with 17 significant digits; `NaN` and
/// infinities are spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&'static str]) -> Self {
        CsvTable {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::input("output", e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| Error::input("output", e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()?)
            .map_err(|e| Error::input("output", format!("{}: {e}", path.display())))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::input("output", e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Error::input("output", format!("{}: {e}", path.display())))
}

fn s_cols(s: Complex64) -> [String; 2] {
    [fmt_f64(s.re), fmt_f64(s.im)]
}

pub fn fiber_integral_table(rows: &[(Complex64, QuadratureResult)]) -> CsvTable {
    let mut t = CsvTable::new(&["s_re", "s_im", "value", "error_estimate", "cells", "flags"]);
    for (s, r) in rows {
        let [a, b] = s_cols(*s);
        t.push(vec![
            a,
            b,
            fmt_f64(r.value),
            fmt_f64(r.error_estimate),
            r.cells.to_string(),
            r.flags.len().to_string(),
        ]);
    }
    t
}

pub fn pairing_table(rows: &[PairingNormResult]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "s_re",
        "s_im",
        "log_norm",
        "boundary_term",
        "integral_term",
        "error_estimate",
    ]);
    for r in rows {
        let [a, b] = s_cols(r.s);
        t.push(vec![
            a,
            b,
            fmt_f64(r.log_norm),
            fmt_f64(r.boundary_term),
            fmt_f64(r.integral_term),
            fmt_f64(r.quadrature.error_estimate),
        ]);
    }
    t
}

pub fn identity_table(rows: &[IdentityReport]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "kind",
        "s_re",
        "s_im",
        "lhs",
        "rhs",
        "defect",
        "error_estimate",
        "analytic",
    ]);
    for r in rows {
        let [a, b] = s_cols(r.s);
        t.push(vec![
            r.kind.clone(),
            a,
            b,
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.defect),
            fmt_f64(r.error_estimate),
            r.analytic.to_string(),
        ]);
    }
    t
}

/// One polarization evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationRow {
    pub values: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

pub fn polarization_table(rows: &[PolarizationRow]) -> CsvTable {
    let mut t = CsvTable::new(&["index", "values", "lhs", "rhs", "defect"]);
    for (i, r) in rows.iter().enumerate() {
        let vals: Vec<String> = r.values.iter().map(|v| fmt_f64(*v)).collect();
        t.push(vec![
            i.to_string(),
            vals.join(";"),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.defect),
        ]);
    }
    t
}

pub fn projection_table(r: &ProjectionCheck) -> CsvTable {
    let mut t = CsvTable::new(&[
        "lhs",
        "lhs_error",
        "rhs",
        "rhs_error",
        "ratio",
        "generic_degree",
    ]);
    t.push(vec![
        fmt_f64(r.lhs.value),
        fmt_f64(r.lhs.error_estimate),
        opt(r.rhs.as_ref().map(|q| q.value)),
        opt(r.rhs.as_ref().map(|q| q.error_estimate)),
        opt(r.ratio),
        r.generic_degree.map(|k| k.to_string()).unwrap_or_default(),
    ]);
    t
}

/// One row per (level, point); points shared by several levels repeat.
/// Failed points have empty `value` and `error`.
pub fn scan_table(series: &ScanSeries) -> CsvTable {
    let mut t = CsvTable::new(&["level", "t", "s_re", "s_im", "value", "error"]);
    for lvl in &series.levels {
        for p in &lvl.points {
            let [a, b] = s_cols(p.s);
            t.push(vec![
                lvl.j_max.to_string(),
                fmt_f64(p.t),
                a,
                b,
                opt(p.value),
                opt(p.error_estimate),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(-0.5), "-5.0000000000000000e-1");
        let x = 0.1f64;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let r = QuadratureResult::exact(1.0);
        let t = fiber_integral_table(&[(Complex64::new(2.0, 0.0), r)]);
        let text = String::from_utf8(t.to_bytes().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s_re,s_im,value,error_estimate,cells,flags"));
        assert!(lines.next().unwrap().starts_with("2.0000000000000000e0,"));
    }
}
