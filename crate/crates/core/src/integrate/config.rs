use crate::error::{Error, Result};
use crate::geometry::Chart;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub branch_exclusion_radius: f64,
    pub singularity_exclusion_radius: f64,
    /// `|x| ≤ R` is integrated in the finite chart, the rest in the
    /// inversion chart.
    pub chart_split_radius: f64,
    /// Cap on the number of leaf cells over both charts.
    pub max_cells: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_depth: 40,
            branch_exclusion_radius: 1e-9,
            singularity_exclusion_radius: 1e-7,
            chart_split_radius: 1.0,
            max_cells: 400_000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::input(
                    format!("quadrature.{name}"),
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("branch_exclusion_radius", self.branch_exclusion_radius)?;
        positive("singularity_exclusion_radius", self.singularity_exclusion_radius)?;
        positive("chart_split_radius", self.chart_split_radius)?;
        if !(4..=60).contains(&self.max_depth) {
            return Err(Error::input(
                "quadrature.max_depth",
                format!("must lie in 4..=60, got {}", self.max_depth),
            ));
        }
        let inner = self.chart_split_radius.min(1.0 / self.chart_split_radius);
        for (name, r) in [
            ("branch_exclusion_radius", self.branch_exclusion_radius),
            ("singularity_exclusion_radius", self.singularity_exclusion_radius),
        ] {
            if r >= inner {
                return Err(Error::input(
                    format!("quadrature.{name}"),
                    format!("must be below the chart radius {inner}"),
                ));
            }
        }
        if self.max_cells < 256 {
            return Err(Error::input("quadrature.max_cells", "must be at least 256"));
        }
        Ok(())
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadFlag {
    /// A cell of the given size around a branch point was excluded.
    BranchExclusion {
        chart: Chart,
        point: [f64; 2],
        radius: f64,
    },
    /// Same, around a logarithmic singularity of the integrand.
    SingularityExclusion {
        chart: Chart,
        point: [f64; 2],
        radius: f64,
    },
    DepthExhausted {
        max_depth: u32,
    },
    CellBudgetExhausted {
        max_cells: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells: usize,
    pub flags: Vec<QuadFlag>,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        QuadratureResult {
            value,
            error_estimate: 0.0,
            cells: 0,
            flags: Vec::new(),
        }
    }

    pub fn depth_exhausted(&self) -> bool {
        self.flags.iter().any(|f| {
            matches!(
                f,
                QuadFlag::DepthExhausted { .. } | QuadFlag::CellBudgetExhausted { .. }
            )
        })
    }

    pub fn exclusions(&self) -> usize {
        self.flags
            .iter()
            .filter(|f| {
                matches!(
                    f,
                    QuadFlag::BranchExclusion { .. } | QuadFlag::SingularityExclusion { .. }
                )
            })
            .count()
    }

    /// `a·self + b·other`, errors combined in absolute value.
    pub fn combine(&self, a: f64, other: &QuadratureResult, b: f64) -> QuadratureResult {
        let mut flags = self.flags.clone();
        flags.extend(other.flags.iter().cloned());
        QuadratureResult {
            value: a * self.value + b * other.value,
            error_estimate: a.abs() * self.error_estimate + b.abs() * other.error_estimate,
            cells: self.cells + other.cells,
            flags,
        }
    }
}
