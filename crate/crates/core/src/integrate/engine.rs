//! Adaptive quadtree over the two polar chart disks `|x| ≤ R` and
//! `|t| ≤ 1/R` of the projection line.

use super::config::{QuadFlag, QuadratureConfig, QuadratureResult};
use super::gauss::gauss_legendre;
use crate::error::{Error, Result};
use crate::geometry::Chart;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

const GAUSS_POINTS: usize = 5;
const INITIAL_DEPTH: u8 = 3;

/// Integrand on the projection line: the sum over all sheets above `x`.
pub(crate) trait ChartIntegrand: Sync {
    /// `hint` is scratch state carried between consecutive samples of one
    /// cell.
    fn eval(&self, chart: Chart, x: Complex64, hint: &mut Vec<Complex64>) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SingularKind {
    /// `1/|x - b|` type: mass of an excluded cell is linear in its size
    Branch,
    /// `log|x - a|` type: mass is quadratic up to a log factor
    Log,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Singularity {
    pub chart: Chart,
    pub x: Complex64,
    pub kind: SingularKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    chart: u8,
    depth: u8,
    ix: u64,
    iy: u64,
}

impl Key {
    fn chart(&self) -> Chart {
        if self.chart == 0 {
            Chart::Finite
        } else {
            Chart::Inversion
        }
    }

    fn children(&self) -> [Key; 4] {
        let d = self.depth + 1;
        [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(a, b)| Key {
            chart: self.chart,
            depth: d,
            ix: 2 * self.ix + a,
            iy: 2 * self.iy + b,
        })
    }

    fn ancestor(&self, depth: u8) -> Key {
        let shift = self.depth - depth;
        Key {
            chart: self.chart,
            depth,
            ix: self.ix >> shift,
            iy: self.iy >> shift,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Leaf {
    coarse: f64,
    kids: [f64; 4],
}

impl Leaf {
    fn value(&self) -> f64 {
        (self.kids[0] + self.kids[1]) + (self.kids[2] + self.kids[3])
    }

    fn err(&self) -> f64 {
        (self.value() - self.coarse).abs()
    }
}

/// Neumaier compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn total(&self) -> f64 {
        self.s + self.c
    }
}

struct Engine<'a> {
    f: &'a dyn ChartIntegrand,
    radius: [f64; 2],
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Engine<'_> {
    fn bounds(&self, k: &Key) -> (f64, f64, f64, f64) {
        let n = (1u64 << k.depth) as f64;
        let rr = self.radius[k.chart as usize];
        (
            k.ix as f64 * rr / n,
            (k.ix + 1) as f64 * rr / n,
            k.iy as f64 * TAU / n,
            (k.iy + 1) as f64 * TAU / n,
        )
    }

    fn size(&self, k: &Key) -> f64 {
        let (r0, r1, t0, t1) = self.bounds(k);
        (r1 - r0).max(r1 * (t1 - t0))
    }

    fn contains(&self, k: &Key, r: f64, theta: f64) -> bool {
        let (r0, r1, t0, t1) = self.bounds(k);
        r0 <= r && r <= r1 && ((t0 <= theta && theta <= t1) || theta + TAU <= t1)
    }

    fn gauss(&self, k: &Key) -> Result<f64> {
        let (r0, r1, t0, t1) = self.bounds(k);
        let (hr, cr) = ((r1 - r0) / 2.0, (r1 + r0) / 2.0);
        let (ht, ct) = ((t1 - t0) / 2.0, (t1 + t0) / 2.0);
        let chart = k.chart();
        let mut acc = 0.0;
        let mut hint = Vec::new();
        for (i, wi) in self.weights.iter().enumerate() {
            let r = cr + hr * self.nodes[i];
            let mut row = 0.0;
            for (j, wj) in self.weights.iter().enumerate() {
                let theta = ct + ht * self.nodes[j];
                let x = Complex64::from_polar(r, theta);
                let v = self.f.eval(chart, x, &mut hint)?;
                if !v.is_finite() {
                    return Err(Error::numerical_with(
                        "integrand is not finite",
                        vec![format!("{chart:?} chart, x = {x}")],
                    ));
                }
                row += wj * v;
            }
            acc += wi * r * row;
        }
        Ok(acc * hr * ht)
    }

    fn leaf(&self, k: &Key, coarse: Option<f64>) -> Result<Leaf> {
        let coarse = match coarse {
            Some(c) => c,
            None => self.gauss(k)?,
        };
        let ch = k.children();
        Ok(Leaf {
            coarse,
            kids: [
                self.gauss(&ch[0])?,
                self.gauss(&ch[1])?,
                self.gauss(&ch[2])?,
                self.gauss(&ch[3])?,
            ],
        })
    }
}

struct Excluded {
    kind: SingularKind,
}

/// `∫ f dA` over the projection line.
pub(crate) fn integrate(
    f: &dyn ChartIntegrand,
    singularities: &[Singularity],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    let (nodes, weights) = gauss_legendre(GAUSS_POINTS);
    let split = cfg.chart_split_radius;
    let eng = Engine {
        f,
        radius: [split, 1.0 / split],
        nodes,
        weights,
    };
    let max_depth = cfg.max_depth.min(60) as u8;

    // Singularities in polar form; points too close to a chart origin are
    // left to the polar Jacobian.
    let sings: Vec<(u8, f64, f64, SingularKind, Complex64)> = singularities
        .iter()
        .filter_map(|s| {
            let ci = match s.chart {
                Chart::Finite => 0u8,
                Chart::Inversion => 1u8,
            };
            let r = s.x.norm();
            let eps = match s.kind {
                SingularKind::Branch => cfg.branch_exclusion_radius,
                SingularKind::Log => cfg.singularity_exclusion_radius,
            };
            if !r.is_finite() || r > eng.radius[ci as usize] || r < eps {
                return None;
            }
            let theta = s.x.arg().rem_euclid(TAU);
            Some((ci, r, theta, s.kind, s.x))
        })
        .collect();

    let mut flags = Vec::new();
    let mut excluded: BTreeMap<Key, Excluded> = BTreeMap::new();
    let mut to_eval: Vec<Key> = Vec::new();
    let mut stack: Vec<Key> = Vec::new();
    let n0 = 1u64 << INITIAL_DEPTH;
    for chart in 0..2u8 {
        for ix in 0..n0 {
            for iy in 0..n0 {
                stack.push(Key {
                    chart,
                    depth: INITIAL_DEPTH,
                    ix,
                    iy,
                });
            }
        }
    }
    while let Some(k) = stack.pop() {
        let inside: Vec<_> = sings
            .iter()
            .filter(|s| s.0 == k.chart && eng.contains(&k, s.1, s.2))
            .collect();
        if inside.is_empty() {
            to_eval.push(k);
            continue;
        }
        let eps = inside
            .iter()
            .map(|s| match s.3 {
                SingularKind::Branch => cfg.branch_exclusion_radius,
                SingularKind::Log => cfg.singularity_exclusion_radius,
            })
            .fold(f64::INFINITY, f64::min);
        if eng.size(&k) <= eps || k.depth >= max_depth {
            let kind = if inside.iter().any(|s| s.3 == SingularKind::Branch) {
                SingularKind::Branch
            } else {
                SingularKind::Log
            };
            for s in &inside {
                let flag_point = [s.4.re, s.4.im];
                let radius = eng.size(&k);
                let flag = match s.3 {
                    SingularKind::Branch => QuadFlag::BranchExclusion {
                        chart: k.chart(),
                        point: flag_point,
                        radius,
                    },
                    SingularKind::Log => QuadFlag::SingularityExclusion {
                        chart: k.chart(),
                        point: flag_point,
                        radius,
                    },
                };
                if !flags.contains(&flag) {
                    flags.push(flag);
                }
            }
            excluded.insert(k, Excluded { kind });
        } else {
            stack.extend(k.children());
        }
    }
    to_eval.sort();
    let evaluated: Vec<Leaf> = to_eval
        .par_iter()
        .map(|k| eng.leaf(k, None))
        .collect::<Result<_>>()?;
    let mut leaves: BTreeMap<Key, Leaf> = to_eval.into_iter().zip(evaluated).collect();

    let mut exhausted = None;
    loop {
        let mut value = Sum::default();
        let mut err = Sum::default();
        for l in leaves.values() {
            value.add(l.value());
            err.add(l.err());
        }
        let tol = cfg.tolerance_for(value.total());
        if err.total() <= tol {
            break;
        }
        if leaves.len() + excluded.len() >= cfg.max_cells {
            exhausted = Some(QuadFlag::CellBudgetExhausted {
                max_cells: cfg.max_cells,
            });
            break;
        }
        let mut order: Vec<(Key, f64)> = leaves
            .iter()
            .filter(|(k, l)| k.depth + 1 < max_depth && l.err() > 0.0)
            .map(|(k, l)| (*k, l.err()))
            .collect();
        if order.is_empty() {
            exhausted = Some(QuadFlag::DepthExhausted {
                max_depth: cfg.max_depth,
            });
            break;
        }
        order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let budget = cfg.max_cells.saturating_sub(leaves.len() + excluded.len()) / 3;
        let take = (leaves.len() / 8).clamp(16, 8192).min(budget.max(1));
        order.truncate(take);
        let jobs: Vec<(Key, f64)> = order
            .iter()
            .flat_map(|(k, _)| {
                let kids = leaves[k].kids;
                k.children().into_iter().zip(kids)
            })
            .collect();
        let fresh: Vec<Leaf> = jobs
            .par_iter()
            .map(|(k, c)| eng.leaf(k, Some(*c)))
            .collect::<Result<_>>()?;
        for (k, _) in &order {
            leaves.remove(k);
        }
        for ((k, _), l) in jobs.into_iter().zip(fresh) {
            leaves.insert(k, l);
        }
    }

    // Exclusion ladder: the ring between an excluded cell and its parent
    // (and grandparent) gives the mass of the excluded cell under a local
    // power law.
    let mut corrections = [(0.0, 0.0); 2];
    for (slot, kind) in [SingularKind::Branch, SingularKind::Log].iter().enumerate() {
        let mut a1: BTreeSet<Key> = BTreeSet::new();
        let mut a2: BTreeSet<Key> = BTreeSet::new();
        for (k, e) in &excluded {
            if e.kind == *kind && k.depth >= INITIAL_DEPTH + 2 {
                a1.insert(k.ancestor(k.depth - 1));
                a2.insert(k.ancestor(k.depth - 2));
            }
        }
        if a1.is_empty() {
            continue;
        }
        let region_sum = |set: &BTreeSet<Key>| {
            let depths: BTreeSet<u8> = set.iter().map(|k| k.depth).collect();
            let mut s = Sum::default();
            for (k, l) in &leaves {
                if depths
                    .iter()
                    .any(|&d| k.depth >= d && set.contains(&k.ancestor(d)))
                {
                    s.add(l.value());
                }
            }
            s.total()
        };
        let s1 = region_sum(&a1);
        let s2 = region_sum(&a2);
        corrections[slot] = match kind {
            SingularKind::Branch => (s1, (s1 - (s2 - s1) / 2.0).abs()),
            SingularKind::Log => (s1 / 3.0, (s1 / 3.0 - (s2 - s1) / 12.0).abs()),
        };
    }

    let mut value = Sum::default();
    let mut err = Sum::default();
    for l in leaves.values() {
        value.add(l.value());
        err.add(l.err());
    }
    for (c, e) in corrections {
        value.add(c);
        err.add(e);
    }
    let value = value.total();
    let err = err.total();
    let tol = cfg.tolerance_for(value);
    if let Some(flag) = exhausted {
        if err > 10.0 * tol {
            return Err(Error::numerical_with(
                "adaptive quadrature did not reach tolerance",
                vec![
                    format!("{flag:?}"),
                    format!("value {value:.6e}, error estimate {err:.3e}, tolerance {tol:.3e}"),
                    format!("{} leaf cells", leaves.len()),
                ],
            ));
        }
        flags.push(flag);
    }
    Ok(QuadratureResult {
        value,
        error_estimate: err,
        cells: leaves.len() + excluded.len(),
        flags,
    })
}
