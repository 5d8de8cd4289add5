//! One-dimensional Gauss–Legendre quadrature and cumulative integral tables.
//!
//! All generating data of the surface families (heights, twists, arc
//! coordinates) are antiderivatives of explicit integrands.  They are stored
//! as [`CumTable`]s: cumulative values on a knot grid, each panel integrated
//! with a fixed 15-point Gauss–Legendre rule.  Evaluation between knots
//! integrates the remainder from the nearest knot with the same rule, so the
//! table evaluates to a smooth function of its argument, is exactly
//! continuous across knots, and is strictly monotone whenever the integrand
//! has one sign.  Knot grids may be graded toward a left endpoint where the
//! integrand has a square-root branch point.

use std::sync::Arc;

use crate::error::{Error, Result};

/// 15-point Gauss–Legendre abscissas on [-1, 1] (nonnegative half).
#[allow(clippy::excessive_precision)]
const GL15_NODES: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_52,
    0.394_151_347_077_563_37,
    0.570_972_172_608_538_8,
    0.724_417_731_360_170_05,
    0.848_206_583_410_427_2,
    0.937_273_392_400_705_9,
    0.987_992_518_020_485_4,
];

/// Weights paired with [`GL15_NODES`].
#[allow(clippy::excessive_precision)]
const GL15_WEIGHTS: [f64; 8] = [
    0.202_578_241_925_561_27,
    0.198_431_485_327_111_58,
    0.186_161_000_015_562_21,
    0.166_269_205_816_993_93,
    0.139_570_677_926_154_31,
    0.107_159_220_467_171_94,
    0.070_366_047_488_108_12,
    0.030_753_241_996_117_268,
];

/// Integrates `f` over `[a, b]` with the fixed 15-point Gauss–Legendre rule.
///
/// Exact for polynomials up to degree 29; `a > b` yields the signed value.
pub fn gauss15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = GL15_WEIGHTS[0] * f(mid);
    for i in 1..8 {
        let d = half * GL15_NODES[i];
        acc += GL15_WEIGHTS[i] * (f(mid + d) + f(mid - d));
    }
    acc * half
}

/// Adaptive Gauss–Legendre integration by panel bisection.
///
/// `tol_per_unit` is an absolute tolerance per unit of interval length; the
/// budget is split between halves on every subdivision, so the total error is
/// bounded by `tol_per_unit * max(1, |b - a|)` for integrable singularities.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol_per_unit: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gauss15(f, a, mid);
        let right = gauss15(f, mid, b);
        let refined = left + right;
        if (refined - whole).abs() <= tol || depth >= 48 {
            return refined;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth + 1)
            + recurse(f, mid, b, right, 0.5 * tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gauss15(f, a, b);
    let tol = tol_per_unit * (b - a).abs().max(1.0);
    recurse(f, a, b, whole, tol, 0)
}

/// Uniformly spaced knots, endpoints included.
pub fn uniform_knots(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut knots: Vec<f64> = (0..n)
        .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
        .collect();
    knots[0] = lo;
    knots[n - 1] = hi;
    knots
}

/// Knots clustered toward `lo` for integrands with a square-root branch
/// point at `singularity` (which must satisfy `singularity <= lo`).
///
/// The grid is uniform in `w = sqrt(x - singularity)`, which makes
/// `sqrt(x - singularity)`-type integrands smooth per panel.
pub fn graded_knots(lo: f64, hi: f64, singularity: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    debug_assert!(singularity <= lo && lo < hi);
    let w0 = (lo - singularity).max(0.0).sqrt();
    let w1 = (hi - singularity).sqrt();
    let mut knots: Vec<f64> = (0..n)
        .map(|j| {
            let w = w0 + (w1 - w0) * j as f64 / (n - 1) as f64;
            singularity + w * w
        })
        .collect();
    knots[0] = lo;
    knots[n - 1] = hi;
    knots
}

/// Cumulative integral of a fixed integrand over a knot grid.
///
/// `eval(x)` returns `anchor + integral from knots[0] to x`; the derivative
/// at any point is the integrand itself.
#[derive(Clone)]
pub struct CumTable {
    knots: Vec<f64>,
    values: Vec<f64>,
    integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for CumTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumTable")
            .field("knots", &self.knots.len())
            .field("domain", &self.domain())
            .finish()
    }
}

impl CumTable {
    /// Builds the table; `anchor` is the value at the first knot.
    pub fn build(
        integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        knots: Vec<f64>,
        anchor: f64,
    ) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidArgument("need at least two knots".into()));
        }
        if !knots.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "knots must be strictly increasing".into(),
            ));
        }
        let mut values = Vec::with_capacity(knots.len());
        values.push(anchor);
        for w in knots.windows(2) {
            let prev = *values.last().unwrap();
            values.push(prev + gauss15(&*integrand, w[0], w[1]));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "integrand produced non-finite cumulative values".into(),
            ));
        }
        Ok(CumTable {
            knots,
            values,
            integrand,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    /// Value range `(eval(lo), eval(hi))`.
    pub fn value_range(&self) -> (f64, f64) {
        (self.values[0], *self.values.last().unwrap())
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn panel_of(&self, x: f64) -> usize {
        let idx = self.knots.partition_point(|k| *k <= x);
        idx.saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Cumulative value at `x`: nearest-knot value plus a Gauss panel
    /// remainder.  Smooth in `x` and exactly continuous across knots.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.panel_of(x);
        if x == self.knots[i] {
            return self.values[i];
        }
        self.values[i] + gauss15(&*self.integrand, self.knots[i], x)
    }

    /// The integrand, which is the exact derivative of [`Self::eval`].
    pub fn derivative(&self, x: f64) -> f64 {
        (self.integrand)(x)
    }

    /// Solves `eval(x) = y` for strictly increasing tables.
    ///
    /// Newton iteration with a bisection safeguard inside the bracketing
    /// panel; polishes to a few ulps of `y`.
    pub fn invert(&self, y: f64) -> f64 {
        let n = self.values.len();
        let y = y.clamp(self.values[0], self.values[n - 1]);
        let j = self
            .values
            .partition_point(|v| *v <= y)
            .saturating_sub(1)
            .min(n - 2);
        let mut lo = self.knots[j];
        let mut hi = self.knots[j + 1];
        let (vlo, vhi) = (self.values[j], self.values[j + 1]);
        let frac = if vhi > vlo {
            (y - vlo) / (vhi - vlo)
        } else {
            0.5
        };
        let mut x = lo + frac.clamp(0.0, 1.0) * (hi - lo);
        let tol = 4.0 * f64::EPSILON * y.abs().max(1.0);
        for _ in 0..100 {
            let g = self.values[j] + gauss15(&*self.integrand, self.knots[j], x) - y;
            if g.abs() <= tol {
                break;
            }
            if g > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = (self.integrand)(x);
            let mut next = if d > 0.0 { x - g / d } else { 0.5 * (lo + hi) };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= f64::EPSILON * x.abs() {
                x = next;
                break;
            }
            x = next;
        }
        x
    }
}
