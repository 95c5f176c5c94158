use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One term `sign · (Σ_{i∈I} X_i)^{n+1}` of the polarization expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationTerm {
    pub subset: Vec<usize>,
    pub sign: i8,
}

pub const MAX_POLARIZATION_N: usize = 8;

/// All `2^{n+1}` subsets `I ⊆ {0..n}` with sign `(-1)^{n+1-|I|}`, so that
/// `Σ sign (Σ_{i∈I} X_i)^{n+1} = (n+1)! X_0 ⋯ X_n`. Subsets are ordered by
/// their bitmask.
pub fn polarization_expand(n: usize) -> Result<Vec<PolarizationTerm>> {
    if n > MAX_POLARIZATION_N {
        return Err(Error::input("n", format!("must be at most {MAX_POLARIZATION_N}, got {n}")));
    }
    Ok((0u32..(1 << (n + 1)))
        .map(|mask| {
            let subset: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
            let sign = if (n + 1 - subset.len()).is_multiple_of(2) { 1 } else { -1 };
            PolarizationTerm { subset, sign }
        })
        .collect())
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn check_arity(terms: &[PolarizationTerm], len: usize) -> Result<usize> {
    let n = terms
        .iter()
        .flat_map(|t| t.subset.iter().copied())
        .max()
        .unwrap_or(0);
    if len != n + 1 {
        return Err(Error::input("xs", format!("expected {} values, got {len}", n + 1)));
    }
    Ok(n)
}

/// `((n+1)! Π X_i, Σ_I sign (Σ_{i∈I} X_i)^{n+1})` in exact integer
/// arithmetic.
pub fn polarization_exact(terms: &[PolarizationTerm], xs: &[i64]) -> Result<(i128, i128)> {
    let n = check_arity(terms, xs.len())?;
    let lhs = factorial(n + 1) * xs.iter().map(|&x| x as i128).product::<i128>();
    let mut rhs: i128 = 0;
    for t in terms {
        let sum: i128 = t.subset.iter().map(|&i| xs[i] as i128).sum();
        let p = sum
            .checked_pow(n as u32 + 1)
            .ok_or_else(|| Error::input("xs", "values too large for exact evaluation"))?;
        rhs += t.sign as i128 * p;
    }
    Ok((lhs, rhs))
}

/// Double-double value `hi + lo`.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let lo = s.1 + self.1 + o.1;
        Dd::two_sum(s.0, lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let lo = e + self.0 * o.1 + self.1 * o.0;
        Dd::two_sum(p, lo)
    }

    fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// Floating-point version of [`polarization_exact`]; sums and products are
/// carried in double-double so cancellation does not dominate.
pub fn polarization_numeric(terms: &[PolarizationTerm], xs: &[f64]) -> Result<(f64, f64)> {
    let n = check_arity(terms, xs.len())?;
    let mut lhs = Dd(factorial(n + 1) as f64, 0.0);
    for &x in xs {
        lhs = lhs.mul(Dd(x, 0.0));
    }
    let mut rhs = Dd(0.0, 0.0);
    for t in terms {
        let mut sum = Dd(0.0, 0.0);
        for &i in &t.subset {
            sum = sum.add(Dd(xs[i], 0.0));
        }
        let mut p = Dd(1.0, 0.0);
        for _ in 0..=n {
            p = p.mul(sum);
        }
        rhs = rhs.add(Dd(t.sign as f64 * p.0, t.sign as f64 * p.1));
    }
    Ok((lhs.value(), rhs.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_equals_one() {
        let t = polarization_expand(1).unwrap();
        let got: Vec<(Vec<usize>, i8)> = t.into_iter().map(|t| (t.subset, t.sign)).collect();
        assert_eq!(
            got,
            vec![(vec![], 1), (vec![0], -1), (vec![1], -1), (vec![0, 1], 1)]
        );
    }

    #[test]
    fn n_equals_zero() {
        let t = polarization_expand(0).unwrap();
        assert_eq!(polarization_exact(&t, &[5]).unwrap(), (5, 5));
    }

    #[test]
    fn too_large() {
        assert!(polarization_expand(9).is_err());
    }
}
