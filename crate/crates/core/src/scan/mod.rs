//! Continuity experiments: a quantity traced along a path that ends at a
//! degenerate fiber, sampled on geometric grids `t_j = 1 - 2^{-j}`.

mod oscillation;

pub use oscillation::{
    lipschitz_check, oscillation_estimate, LipschitzReport, OscillationReport, Verdict,
};

use crate::deligne::{pairing_norm, PairingInput};
use crate::error::{Error, Result};
use crate::geometry::{singular_locus, CurveFamily, DEFAULT_SINGULAR_TOL};
use crate::integrate::{PhiSpec, QuadratureConfig};
use crate::metrics::HermitianBundle;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default refinement levels: the finest sample sits at `2^{-12}` of the
/// path span from the endpoint.
pub const DEFAULT_LEVELS: [u32; 3] = [8, 10, 12];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "quantity", rename_all = "snake_case")]
pub enum ScanQuantity {
    FiberIntegral {
        family: CurveFamily,
        phi: PhiSpec,
        bundle: HermitianBundle,
    },
    PairingNorm {
        input: PairingInput,
    },
}

impl ScanQuantity {
    pub fn family(&self) -> &CurveFamily {
        match self {
            ScanQuantity::FiberIntegral { family, .. } => family,
            ScanQuantity::PairingNorm { input } => &input.family,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScanQuantity::FiberIntegral { phi, bundle, .. } => {
                phi.validate()?;
                bundle.validate("bundle")
            }
            ScanQuantity::PairingNorm { input } => input.validate(),
        }
    }

    /// `(value, error estimate)` at `s`.
    pub fn evaluate(&self, s: Complex64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
        match self {
            ScanQuantity::FiberIntegral {
                family,
                phi,
                bundle,
            } => {
                let fiber = family.fiber(s)?;
                let r = phi.integrate(&fiber, bundle, cfg)?;
                Ok((r.value, r.error_estimate))
            }
            ScanQuantity::PairingNorm { input } => {
                let r = pairing_norm(input, s, cfg)?;
                Ok((r.log_norm, r.quadrature.error_estimate))
            }
        }
    }
}

/// Straight segment `s(t) = start + t (end - start)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPath {
    pub start: Complex64,
    pub end: Complex64,
}

impl ScanPath {
    pub fn at(&self, t: f64) -> Complex64 {
        self.start + (self.end - self.start) * t
    }

    pub fn span(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanTask {
    #[serde(flatten)]
    pub quantity: ScanQuantity,
    pub path: ScanPath,
    /// largest grid index `j` per level, strictly increasing
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
}

fn default_levels() -> Vec<u32> {
    DEFAULT_LEVELS.to_vec()
}

impl ScanTask {
    pub fn validate(&self) -> Result<()> {
        self.quantity.validate()?;
        let fam = self.quantity.family();
        if self.path.span() == 0.0 {
            return Err(Error::input("path", "start and end coincide"));
        }
        for (name, s) in [("path.start", self.path.start), ("path.end", self.path.end)] {
            if !fam.base_domain.contains(s) {
                return Err(Error::input(name, format!("{s} lies outside the base domain")));
            }
        }
        if self.levels.len() < 3 {
            return Err(Error::input("levels", "at least 3 levels are required"));
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) || self.levels[0] < 2 {
            return Err(Error::input(
                "levels",
                "must be strictly increasing and start at 2 or more",
            ));
        }
        if *self.levels.last().unwrap_or(&0) > 40 {
            return Err(Error::input("levels", "grid index above 40"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub j: u32,
    pub t: f64,
    pub s: Complex64,
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    /// why the point was excluded
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanLevel {
    pub j_max: u32,
    pub points: Vec<ScanPoint>,
    /// `max |v_{j+1} - v_j|` over the last two steps
    pub oscillation: Option<f64>,
    /// largest error estimate among the tail points
    pub tail_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSeries {
    pub levels: Vec<ScanLevel>,
    pub extrapolated_limit: Option<f64>,
    pub uncertainty: Option<f64>,
}

pub fn grid_t(j: u32) -> f64 {
    1.0 - (0.5f64).powi(j as i32)
}

impl ScanSeries {
    /// Builds the level structure from samples indexed by `j`.
    pub fn from_samples(levels: &[u32], samples: Vec<ScanPoint>) -> Self {
        let mut out = Vec::with_capacity(levels.len());
        for &jm in levels {
            let points: Vec<ScanPoint> = samples.iter().filter(|p| p.j <= jm).cloned().collect();
            let tail: Vec<&ScanPoint> = points.iter().filter(|p| p.j + 2 >= jm).collect();
            let ok = tail.len() == 3 && tail.iter().all(|p| p.value.is_some());
            let (oscillation, tail_error) = if ok {
                let v: Vec<f64> = tail.iter().filter_map(|p| p.value).collect();
                let e = tail
                    .iter()
                    .filter_map(|p| p.error_estimate)
                    .fold(0.0, f64::max);
                (Some((v[1] - v[0]).abs().max((v[2] - v[1]).abs())), Some(e))
            } else {
                (None, None)
            };
            out.push(ScanLevel {
                j_max: jm,
                points,
                oscillation,
                tail_error,
            });
        }
        let (extrapolated_limit, uncertainty) = extrapolate(&samples);
        ScanSeries {
            levels: out,
            extrapolated_limit,
            uncertainty,
        }
    }

    /// A series from a function of `t`, for checking the statistics.
    pub fn synthetic(levels: &[u32], f: impl Fn(f64) -> (f64, f64)) -> Self {
        let jm = levels.iter().copied().max().unwrap_or(0);
        let samples = (0..=jm)
            .map(|j| {
                let t = grid_t(j);
                let (v, e) = f(t);
                ScanPoint {
                    j,
                    t,
                    s: Complex64::new(t, 0.0),
                    value: Some(v),
                    error_estimate: Some(e),
                    failure: None,
                }
            })
            .collect();
        ScanSeries::from_samples(levels, samples)
    }

    pub fn finest(&self) -> Option<&ScanLevel> {
        self.levels.last()
    }
}

fn aitken(a: f64, b: f64, c: f64) -> Option<f64> {
    let d2 = (c - b) - (b - a);
    if d2 == 0.0 || !d2.is_finite() {
        return None;
    }
    let l = c - (c - b) * (c - b) / d2;
    l.is_finite().then_some(l)
}

/// Aitken's `Δ²` on the last three values, with the spread against the
/// previous triple and the distance to the last value as uncertainty.
fn extrapolate(samples: &[ScanPoint]) -> (Option<f64>, Option<f64>) {
    let good: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|p| Some((p.value?, p.error_estimate.unwrap_or(0.0))))
        .collect();
    let n = good.len();
    if n == 0 {
        return (None, None);
    }
    let last = good[n - 1].0;
    let err = good[n.saturating_sub(4)..]
        .iter()
        .map(|g| g.1)
        .fold(0.0, f64::max);
    if n < 3 {
        return (Some(last), Some(10.0 * err));
    }
    let step = (good[n - 1].0 - good[n - 2].0).abs();
    let a1 = aitken(good[n - 3].0, good[n - 2].0, good[n - 1].0);
    let a0 = if n >= 4 {
        aitken(good[n - 4].0, good[n - 3].0, good[n - 2].0)
    } else {
        None
    };
    match a1 {
        // reject extrapolations that jump further than the data moves
        Some(l) if (l - last).abs() <= 10.0 * step + 10.0 * err => {
            let spread = a0.map_or(step, |l0| (l - l0).abs());
            (Some(l), Some((l - last).abs() + spread + 10.0 * err))
        }
        _ => (Some(last), Some(step + 10.0 * err)),
    }
}

/// Traces `task.quantity` along the path. Samples are evaluated in
/// parallel; a sample whose quadrature fails is recorded and excluded.
pub fn continuity_scan(task: &ScanTask, cfg: &QuadratureConfig) -> Result<ScanSeries> {
    task.validate()?;
    cfg.validate()?;
    let fam = task.quantity.family();
    let jm = *task.levels.last().unwrap_or(&0);
    let js: Vec<u32> = (0..=jm).collect();
    let samples: Vec<ScanPoint> = js
        .par_iter()
        .map(|&j| {
            let t = grid_t(j);
            let s = task.path.at(t);
            let fiber = fam.fiber(s).map_err(|e| Error::Path {
                t,
                message: e.to_string(),
            })?;
            match singular_locus(&fiber, DEFAULT_SINGULAR_TOL) {
                Ok(v) if v.is_empty() => {}
                Ok(v) => {
                    return Err(Error::Path {
                        t,
                        message: format!("fiber at s = {s} is singular at {}", v[0]),
                    })
                }
                Err(e) => {
                    return Err(Error::Path {
                        t,
                        message: e.to_string(),
                    })
                }
            }
            Ok(match task.quantity.evaluate(s, cfg) {
                Ok((v, e)) => ScanPoint {
                    j,
                    t,
                    s,
                    value: Some(v),
                    error_estimate: Some(e),
                    failure: None,
                },
                Err(e @ Error::Numerical { .. }) => ScanPoint {
                    j,
                    t,
                    s,
                    value: None,
                    error_estimate: None,
                    failure: Some(e.to_string()),
                },
                Err(e) => {
                    return Err(Error::Path {
                        t,
                        message: e.to_string(),
                    })
                }
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScanSeries::from_samples(&task.levels, samples))
}

/// Values at arbitrary path parameters (no level structure).
pub fn sample_path(task: &ScanTask, ts: &[f64], cfg: &QuadratureConfig) -> Result<Vec<(f64, f64, f64)>> {
    task.quantity.validate()?;
    ts.par_iter()
        .map(|&t| {
            let (v, e) = task.quantity.evaluate(task.path.at(t), cfg)?;
            Ok((t, v, e))
        })
        .collect()
}
