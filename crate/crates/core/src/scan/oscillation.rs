use super::ScanSeries;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Required decrease of the tail oscillation from one level to the next.
pub const DECAY_FACTOR: f64 = 1.5;
/// Oscillations below this multiple of the quadrature error count as noise.
pub const NOISE_MULTIPLE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONSISTENT-WITH-CONTINUITY")]
    ConsistentWithContinuity,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithContinuity => "CONSISTENT-WITH-CONTINUITY",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub oscillations: Vec<f64>,
    pub noise_floors: Vec<f64>,
    /// `osc_ℓ / osc_{ℓ+1}`
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
}

/// Per-level tail oscillations and a verdict. Never concludes
/// discontinuity.
pub fn oscillation_estimate(series: &ScanSeries) -> Result<OscillationReport> {
    let usable: Vec<(f64, f64)> = series
        .levels
        .iter()
        .filter_map(|l| Some((l.oscillation?, l.tail_error.unwrap_or(0.0))))
        .collect();
    if usable.len() < 3 {
        return Err(Error::input(
            "series",
            format!("need at least 3 usable levels, got {}", usable.len()),
        ));
    }
    let oscillations: Vec<f64> = usable.iter().map(|u| u.0).collect();
    let noise_floors: Vec<f64> = usable.iter().map(|u| NOISE_MULTIPLE * u.1).collect();
    let mut ratios = Vec::new();
    let mut ok = true;
    for k in 0..usable.len() - 1 {
        let (a, b) = (oscillations[k], oscillations[k + 1]);
        ratios.push(if b == 0.0 { f64::INFINITY } else { a / b });
        let step_ok = if a > noise_floors[k] {
            b * DECAY_FACTOR <= a || b <= noise_floors[k + 1]
        } else {
            b <= noise_floors[k + 1].max(noise_floors[k])
        };
        ok &= step_ok;
    }
    Ok(OscillationReport {
        oscillations,
        noise_floors,
        ratios,
        verdict: if ok {
            Verdict::ConsistentWithContinuity
        } else {
            Verdict::Inconclusive
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// fitted on the coarsest level, with a safety factor of 2
    pub constant: f64,
    /// largest `|Δv| / (C |Δt| + 5 (e + e'))` over the finer levels
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Two-sided Lipschitz consistency over sampled levels of `(t, value,
/// error)`; levels must be ordered coarse to fine.
pub fn lipschitz_check(levels: &[Vec<(f64, f64, f64)>]) -> Result<LipschitzReport> {
    if levels.len() < 2 || levels.iter().any(|l| l.len() < 2) {
        return Err(Error::input("levels", "need two or more levels of two or more points"));
    }
    let slopes = |l: &[(f64, f64, f64)]| -> Vec<(f64, f64, f64)> {
        let mut v = l.to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.windows(2)
            .map(|w| ((w[1].0 - w[0].0).abs(), (w[1].1 - w[0].1).abs(), w[0].2 + w[1].2))
            .collect()
    };
    let constant = 2.0
        * slopes(&levels[0])
            .iter()
            .map(|(dt, dv, _)| if *dt > 0.0 { dv / dt } else { 0.0 })
            .fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for l in &levels[1..] {
        for (dt, dv, e) in slopes(l) {
            let bound = constant * dt + 5.0 * e;
            let r = if bound > 0.0 {
                dv / bound
            } else if dv == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(r);
        }
    }
    Ok(LipschitzReport {
        constant,
        worst_ratio: worst,
        passed: worst <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_modulus_is_consistent() {
        let s = ScanSeries::synthetic(&[8, 10, 12], |t| ((1.0 - t).sqrt(), 0.0));
        let r = oscillation_estimate(&s).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithContinuity);
        for q in &r.ratios {
            assert!((q - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn jump_is_inconclusive() {
        let s = ScanSeries::synthetic(&[8, 10, 12], |t| {
            let j = (-(1.0 - t).log2()).round() as i32;
            (if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        });
        assert_eq!(oscillation_estimate(&s).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn constant_is_consistent() {
        let s = ScanSeries::synthetic(&[8, 10, 12], |_| (3.0, 0.0));
        let r = oscillation_estimate(&s).unwrap();
        assert!(r.oscillations.iter().all(|o| *o == 0.0));
        assert_eq!(r.verdict, Verdict::ConsistentWithContinuity);
    }

    #[test]
    fn two_levels_rejected() {
        let s = ScanSeries::synthetic(&[8, 10], |_| (3.0, 0.0));
        assert!(oscillation_estimate(&s).is_err());
    }
}
