//! Bour coordinates and the two-parameter isometric family of a helicoidal
//! surface.
//!
//! A helicoidal seed of pitch `mu` with generating curve `(R(u), 0, L(u))`
//! admits coordinates `(s, t)` in which its metric is `ds^2 + U^2 dt^2`,
//! where the Bour function satisfies `U^2 = R^2 + mu^2` and
//!
//! ```text
//! ds^2      = dR^2 + R^2 / (R^2 + mu^2) dL^2
//! d Theta   = mu / (R^2 + mu^2) dL,        t = theta + Theta .
//! ```
//!
//! From `U(s)` alone, a two-parameter family of isometric helicoidal
//! surfaces is recovered for scale `lambda` and pitch `h`:
//!
//! ```text
//! R^2       = lambda^2 U^2 - h^2
//! (dL/ds)^2 = lambda^2 U^2 (lambda^2 U^2 (1 - lambda^2 (dU/ds)^2) - h^2)
//!             / (lambda^2 U^2 - h^2)^2
//! d Theta   = h / (lambda^2 U^2) dL
//! ```
//!
//! with angle function `n3^2 = lambda^2 (dU/ds)^2`.  The member
//! `(lambda, h) = (1, mu)` reproduces the seed.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::TranslatorSurface;
use crate::quadrature::{graded_knots, uniform_knots, CumTable};
use crate::surface::{ParametricPatch, Rect, ScalarCurve, StepPolicy, Vec3};

/// Radicand floor for domain trimming.
pub const RADICAND_FLOOR: f64 = 1e-12;

/// Sign choice for the height branch; the two branches are congruent by a
/// reflection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignBranch {
    #[default]
    Plus,
    Minus,
}

impl SignBranch {
    fn value(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }
}

/// Helicoidal surface given by its pitch and generating curve in the
/// xz-plane, parametrized as `(u, theta) -> (R cos theta, R sin theta,
/// L + mu theta)`.
#[derive(Clone, Debug)]
pub struct HelicoidalSeed {
    pub pitch: f64,
    pub radius: ScalarCurve,
    pub height: ScalarCurve,
    pub domain: (f64, f64),
}

impl HelicoidalSeed {
    pub fn new(
        pitch: f64,
        radius: ScalarCurve,
        height: ScalarCurve,
        domain: (f64, f64),
    ) -> Result<Self> {
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bad seed domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        if !pitch.is_finite() {
            return Err(Error::InvalidArgument("pitch must be finite".into()));
        }
        Ok(HelicoidalSeed {
            pitch,
            radius,
            height,
            domain,
        })
    }

    /// Seed for a constructed translator member, with `u = U`.
    pub fn from_member(surface: &TranslatorSurface) -> Result<Self> {
        let datum = surface.datum().ok_or_else(|| {
            Error::InvalidArgument("cylinder has no generating curve datum".into())
        })?;
        let (d_r, d_rs, d_rc) = (datum.clone(), datum.clone(), datum.clone());
        let radius = ScalarCurve::new(move |u| d_r.radius(u))
            .with_derivative(move |u| d_rs.radius_slope(u))
            .with_second(move |u| d_rc.radius_curv(u));
        let (d_h, d_hs, d_hc) = (datum.clone(), datum.clone(), datum.clone());
        let height = ScalarCurve::new(move |u| d_h.height(u))
            .with_derivative(move |u| d_hs.height_slope(u))
            .with_second(move |u| d_hc.height_curv(u));
        HelicoidalSeed::new(datum.params().h, radius, height, surface.u_domain())
    }

    /// The `(u, theta)` patch of the seed itself.
    pub fn patch(&self) -> ParametricPatch {
        let seed = self.clone();
        let mu = self.pitch;
        ParametricPatch::new(
            "helicoidal-seed",
            Rect::new(self.domain.0, self.domain.1, 0.0, 2.0 * PI),
            Arc::new(move |u, theta| {
                let r = seed.radius.value(u);
                Vec3::new(
                    r * theta.cos(),
                    r * theta.sin(),
                    seed.height.value(u) + mu * theta,
                )
            }),
        )
    }
}

/// Bour coordinates of a seed: arc coordinate `s(u)`, phase `Theta(u)` and
/// the Bour function `U`, all queryable in either parameter.
#[derive(Clone, Debug)]
pub struct BourChart {
    seed: HelicoidalSeed,
    s_table: CumTable,
    theta_table: CumTable,
}

/// Builds the Bour chart of a seed on a `grid_n`-knot grid.
pub fn build_bour_chart(seed: &HelicoidalSeed, grid_n: usize) -> Result<BourChart> {
    let policy = StepPolicy::default();
    let mu = seed.pitch;
    let (r, h) = (seed.radius.clone(), seed.height.clone());
    let speed = move |u: f64| {
        let rad = r.value(u);
        let rp = r.derivative(u, &policy);
        let lp = h.derivative(u, &policy);
        let usq = rad * rad + mu * mu;
        let swirl = if usq > 0.0 {
            rad * rad * lp * lp / usq
        } else {
            0.0
        };
        (rp * rp + swirl).sqrt()
    };

    let knots = uniform_knots(seed.domain.0, seed.domain.1, grid_n.max(16));
    for &u in &knots {
        let v = speed(u);
        if !v.is_finite() {
            return Err(Error::Degenerate(format!(
                "arc speed is not finite at u = {u}"
            )));
        }
        if v <= 1e-12 {
            return Err(Error::Degenerate(format!(
                "zero-speed generating curve at u = {u}; the arc coordinate is not monotone"
            )));
        }
    }
    let interior = &knots[1..knots.len() - 1];
    if let Some(&u) = interior.iter().find(|&&u| !(seed.radius.value(u) > 0.0)) {
        return Err(Error::Domain(format!(
            "generating curve radius must be positive, violated at u = {u}"
        )));
    }

    let s_table = CumTable::build(Arc::new(speed), knots.clone(), 0.0)?;

    let theta_integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync> = if mu == 0.0 {
        Arc::new(|_u| 0.0)
    } else {
        let (r, h) = (seed.radius.clone(), seed.height.clone());
        Arc::new(move |u: f64| {
            let rad = r.value(u);
            mu * h.derivative(u, &policy) / (rad * rad + mu * mu)
        })
    };
    let theta_table = CumTable::build(theta_integrand, knots, 0.0)?;

    Ok(BourChart {
        seed: seed.clone(),
        s_table,
        theta_table,
    })
}

impl BourChart {
    pub fn seed(&self) -> &HelicoidalSeed {
        &self.seed
    }

    pub fn u_param_domain(&self) -> (f64, f64) {
        self.seed.domain
    }

    pub fn s_domain(&self) -> (f64, f64) {
        self.s_table.value_range()
    }

    pub fn s_of_u(&self, u: f64) -> f64 {
        self.s_table.eval(u)
    }

    pub fn u_of_s(&self, s: f64) -> f64 {
        self.s_table.invert(s)
    }

    /// Bour function `U = sqrt(R^2 + mu^2)` at the curve parameter `u`.
    pub fn bour_u_at(&self, u: f64) -> f64 {
        let r = self.seed.radius.value(u);
        (r * r + self.pitch() * self.pitch()).sqrt()
    }

    /// `dU/du` at the curve parameter, from `U U' = R R'`.
    pub fn bour_u_slope_at(&self, u: f64) -> f64 {
        let policy = StepPolicy::default();
        let r = self.seed.radius.value(u);
        let rp = self.seed.radius.derivative(u, &policy);
        r * rp / self.bour_u_at(u)
    }

    /// `ds/du` at the curve parameter.
    pub fn arc_speed_at(&self, u: f64) -> f64 {
        self.s_table.derivative(u)
    }

    pub fn theta_at(&self, u: f64) -> f64 {
        self.theta_table.eval(u)
    }

    pub fn bour_u(&self, s: f64) -> f64 {
        self.bour_u_at(self.u_of_s(s))
    }

    /// `dU/ds` by the chain rule through the seed parameter.
    pub fn du_ds(&self, s: f64) -> f64 {
        let u = self.u_of_s(s);
        self.bour_u_slope_at(u) / self.arc_speed_at(u)
    }

    pub fn pitch(&self) -> f64 {
        self.seed.pitch
    }

    /// The Bour function as a curve in `s` with analytic first derivative.
    pub fn bour_curve(&self) -> ScalarCurve {
        let a = self.clone();
        let b = self.clone();
        ScalarCurve::new(move |s| a.bour_u(s)).with_derivative(move |s| b.du_ds(s))
    }

    /// The seed surface reparametrized over `(s, t)`, in which its metric is
    /// `ds^2 + U^2 dt^2`.
    pub fn bour_patch(&self) -> ParametricPatch {
        let chart = self.clone();
        let mu = self.pitch();
        let (s_lo, s_hi) = self.s_domain();
        ParametricPatch::new(
            "bour-chart",
            Rect::new(s_lo, s_hi, 0.0, 2.0 * PI),
            Arc::new(move |s, t| {
                let u = chart.u_of_s(s);
                let r = chart.seed.radius.value(u);
                let theta = t - chart.theta_at(u);
                Vec3::new(
                    r * theta.cos(),
                    r * theta.sin(),
                    chart.seed.height.value(u) + mu * theta,
                )
            }),
        )
    }
}

/// Squared angle function of the `(lambda, h)` member:
/// `lambda^2 (dU/ds)^2`.  Values above one signal that no immersed member
/// with that angle exists at `s`.
pub fn family_angle_sq(u_of_s: &ScalarCurve, lambda: f64, s: f64, policy: &StepPolicy) -> f64 {
    let d = u_of_s.derivative(s, policy);
    lambda * lambda * d * d
}

/// Generating datum of the `(lambda, h)` member, realized as quadrature
/// tables over the seed parameter and queried in the arc coordinate.
#[derive(Clone, Debug)]
pub struct DeformedDatum {
    chart: BourChart,
    pub lambda: f64,
    pub pitch: f64,
    pub sign: SignBranch,
    u_range: (f64, f64),
    s_range: (f64, f64),
    height_table: CumTable,
    twist_table: CumTable,
}

/// Recovers `(R, L, Theta)` of the `(lambda, h)` member from the chart.
///
/// The working interval is the maximal closed subinterval on which both
/// radicands stay above [`RADICAND_FLOOR`]; integration constants are
/// anchored to the seed's height and phase at its left end, which makes the
/// `(1, mu)` member reproduce the seed pointwise.
pub fn recover_datum(
    chart: &BourChart,
    lambda: f64,
    pitch: f64,
    sign: SignBranch,
) -> Result<DeformedDatum> {
    if lambda == 0.0 || !lambda.is_finite() || !pitch.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need finite lambda != 0 and finite pitch, got lambda = {lambda}, h = {pitch}"
        )));
    }
    let l2 = lambda * lambda;
    let h2 = pitch * pitch;

    let ch = chart.clone();
    let rho1 = move |u: f64| {
        let bu = ch.bour_u_at(u);
        l2 * bu * bu - h2
    };
    let ch = chart.clone();
    let rho2 = move |u: f64| {
        let bu = ch.bour_u_at(u);
        let du_ds = ch.bour_u_slope_at(u) / ch.arc_speed_at(u);
        l2 * bu * bu * (1.0 - l2 * du_ds * du_ds) - h2
    };

    let (u_lo, u_hi) = chart.u_param_domain();
    let valid = |u: f64| rho1(u) > RADICAND_FLOOR && rho2(u) > RADICAND_FLOOR;

    // locate the maximal valid run on a fine scan, then refine its edges
    let n_scan = 2048;
    let at = |i: usize| u_lo + (u_hi - u_lo) * i as f64 / (n_scan - 1) as f64;
    let flags = (0..n_scan).map(|i| valid(at(i)));
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for (i, ok) in flags.chain(std::iter::once(false)).enumerate() {
        match (ok, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                let len = i - start;
                if best.is_none_or(|(s, e)| len > e - s) {
                    best = Some((start, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let (i0, i1) = best.ok_or_else(|| Error::DomainViolation {
        what: format!(
            "deformation radicand lambda^2 U^2 (1 - lambda^2 (dU/ds)^2) - h^2 \
             for (lambda, h) = ({lambda}, {pitch})"
        ),
        lo: chart.s_domain().0,
        hi: chart.s_domain().1,
    })?;

    let bisect = |mut bad: f64, mut good: f64| {
        for _ in 0..60 {
            let mid = 0.5 * (bad + good);
            if valid(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    let mut a = at(i0);
    let mut b = at(i1);
    if i0 > 0 {
        a = bisect(at(i0 - 1), a);
    }
    if i1 + 1 < n_scan {
        b = bisect(at(i1 + 1), b);
    }
    if !(b - a > 1e-9 * (u_hi - u_lo)) {
        return Err(Error::DomainViolation {
            what: format!("valid interval for (lambda, h) = ({lambda}, {pitch}) is degenerate"),
            lo: chart.s_of_u(a),
            hi: chart.s_of_u(b),
        });
    }

    // height slope in the seed parameter: |dL/du| = |lambda| U sqrt(rho2) / rho1 * ds/du
    let ch = chart.clone();
    let sgn = sign.value();
    let height_slope = {
        let rho1 = rho1.clone();
        let rho2 = rho2.clone();
        move |u: f64| {
            let bu = ch.bour_u_at(u);
            sgn * lambda.abs() * bu * rho2(u).max(0.0).sqrt() / rho1(u) * ch.arc_speed_at(u)
        }
    };
    let twist_slope = {
        let ch = chart.clone();
        let height_slope = height_slope.clone();
        move |u: f64| {
            let bu = ch.bour_u_at(u);
            pitch / (l2 * bu * bu) * height_slope(u)
        }
    };

    // grade toward the left edge, where the trimmed radicand vanishes
    let knots = if a > u_lo + 1e-12 * (u_hi - u_lo) {
        graded_knots(a, b, a - 1e-9 * (u_hi - u_lo), 512)
    } else {
        uniform_knots(a, b, 512)
    };
    let height_anchor = chart.seed.height.value(a);
    let twist_anchor = chart.theta_at(a);
    let height_table = CumTable::build(Arc::new(height_slope), knots.clone(), height_anchor)?;
    let twist_table = CumTable::build(Arc::new(twist_slope), knots, twist_anchor)?;

    Ok(DeformedDatum {
        chart: chart.clone(),
        lambda,
        pitch,
        sign,
        u_range: (a, b),
        s_range: (chart.s_of_u(a), chart.s_of_u(b)),
        height_table,
        twist_table,
    })
}

impl DeformedDatum {
    pub fn s_domain(&self) -> (f64, f64) {
        self.s_range
    }

    pub fn u_param_domain(&self) -> (f64, f64) {
        self.u_range
    }

    /// Radius `sqrt(lambda^2 U^2 - h^2)` at arc coordinate `s`.
    pub fn radius(&self, s: f64) -> f64 {
        let bu = self.chart.bour_u(s);
        (self.lambda * self.lambda * bu * bu - self.pitch * self.pitch)
            .max(0.0)
            .sqrt()
    }

    pub fn height(&self, s: f64) -> f64 {
        self.height_table.eval(self.chart.u_of_s(s))
    }

    pub fn twist(&self, s: f64) -> f64 {
        self.twist_table.eval(self.chart.u_of_s(s))
    }
}

/// The patch of the `(lambda, h)` member over `(s, t)`; its first
/// fundamental form equals `ds^2 + U^2 dt^2` of the seed.
pub fn family_patch(datum: &DeformedDatum) -> ParametricPatch {
    let d = datum.clone();
    let (s_lo, s_hi) = datum.s_domain();
    let lambda = datum.lambda;
    let pitch = datum.pitch;
    ParametricPatch::new(
        format!("deformed(lambda={lambda}, h={pitch})"),
        Rect::new(s_lo, s_hi, 0.0, 2.0 * PI),
        Arc::new(move |s, t| {
            let u = d.chart.u_of_s(s);
            let r = {
                let bu = d.chart.bour_u_at(u);
                (lambda * lambda * bu * bu - pitch * pitch).max(0.0).sqrt()
            };
            let phi = t / lambda - d.twist_table.eval(u);
            Vec3::new(
                r * phi.cos(),
                r * phi.sin(),
                d.height_table.eval(u) + pitch * phi,
            )
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_helicoidal, FamilyParams};
    use crate::quadrature::integrate_adaptive;
    use crate::surface::{warped_metric_curvature, JetMode};

    const POLICY: StepPolicy = StepPolicy {
        first_min: 1e-5,
        first_rel: 1e-5,
        second_min: 1e-4,
        second_rel: 1e-4,
    };

    fn disk_seed(domain: (f64, f64)) -> HelicoidalSeed {
        HelicoidalSeed::new(
            0.0,
            ScalarCurve::new(|u| u)
                .with_derivative(|_| 1.0)
                .with_second(|_| 0.0),
            ScalarCurve::constant(0.0),
            domain,
        )
        .unwrap()
    }

    fn member_seed(c: f64, h: f64) -> (TranslatorSurface, HelicoidalSeed) {
        let surface = build_helicoidal(FamilyParams { c, h }, 5.0, 512).unwrap();
        let seed = HelicoidalSeed::from_member(&surface).unwrap();
        (surface, seed)
    }

    #[test]
    fn flat_disk_chart_is_identity() {
        let chart = build_bour_chart(&disk_seed((0.1, 2.0)), 256).unwrap();
        for i in 0..20 {
            let u = 0.1 + 1.9 * i as f64 / 19.0;
            assert!((chart.s_of_u(u) - (u - 0.1)).abs() < 1e-12);
            assert!((chart.bour_u_at(u) - u).abs() < 1e-15);
            assert!(chart.theta_at(u).abs() < 1e-15);
        }
    }

    #[test]
    fn vertical_cylinder_chart() {
        // R = 1, L = u, mu = 0: ds^2 = 0 + (1/1) du^2, so s = u - u0 and U = 1
        let seed = HelicoidalSeed::new(
            0.0,
            ScalarCurve::constant(1.0),
            ScalarCurve::new(|u| u)
                .with_derivative(|_| 1.0)
                .with_second(|_| 0.0),
            (0.0, 3.0),
        )
        .unwrap();
        let chart = build_bour_chart(&seed, 256).unwrap();
        for i in 0..20 {
            let u = 3.0 * i as f64 / 19.0;
            assert!((chart.s_of_u(u) - u).abs() < 1e-12);
            assert!((chart.bour_u_at(u) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn paraboloid_profile_arc_length() {
        // R = u, L = u^2/2, mu = 0: ds/du = sqrt(1 + u^2)
        let seed = HelicoidalSeed::new(
            0.0,
            ScalarCurve::new(|u| u)
                .with_derivative(|_| 1.0)
                .with_second(|_| 0.0),
            ScalarCurve::new(|u: f64| 0.5 * u * u)
                .with_derivative(|u| u)
                .with_second(|_| 1.0),
            (0.0, 1.0),
        )
        .unwrap();
        let chart = build_bour_chart(&seed, 512).unwrap();
        let want = 0.5 * (2.0f64.sqrt() + 1.0f64.asinh());
        assert!((chart.s_of_u(1.0) - want).abs() < 1e-10);
        assert!((want - 1.147794).abs() < 1e-6);
    }

    #[test]
    fn zero_speed_seed_is_degenerate() {
        let seed = HelicoidalSeed::new(
            0.0,
            ScalarCurve::constant(1.0),
            ScalarCurve::constant(0.0),
            (0.0, 1.0),
        )
        .unwrap();
        assert!(matches!(
            build_bour_chart(&seed, 64),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn chart_consistency_bour_function() {
        // U^2 - R^2 = mu^2 along the seed
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 256).unwrap();
        let (lo, hi) = chart.u_param_domain();
        for i in 0..30 {
            let u = lo + (hi - lo) * i as f64 / 29.0;
            let bu = chart.bour_u_at(u);
            let r = seed.radius.value(u);
            assert!((bu * bu - r * r - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bour_patch_metric_is_warped_form() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let patch = chart.bour_patch();
        let (s_lo, s_hi) = chart.s_domain();
        for i in 0..12 {
            for j in 0..4 {
                let s = s_lo + (s_hi - s_lo) * (0.06 + 0.88 * i as f64 / 11.0);
                let t = 0.4 + 1.4 * j as f64;
                let m = patch
                    .first_fundamental_form(s, t, JetMode::Numeric, &POLICY)
                    .unwrap();
                let bu = chart.bour_u(s);
                assert!((m.e - 1.0).abs() < 1e-5, "E = {} at s = {s}", m.e);
                assert!(m.f.abs() < 1e-5);
                assert!((m.g - bu * bu).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn chart_angle_of_translator_seed() {
        // (dU/ds)^2 = 1 / (U^2 + c); c = 1 at U = 1 gives 1/2
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let curve = chart.bour_curve();
        let s1 = chart.s_of_u(1.3);
        let want = 1.0 / (1.3f64 * 1.3 + 1.0);
        let got = family_angle_sq(&curve, 1.0, s1, &POLICY);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");

        // constant Bour function (cylinder): zero
        let flat = ScalarCurve::constant(2.0);
        assert_eq!(family_angle_sq(&flat, 1.0, 0.3, &POLICY), 0.0);

        // lambda = 2 doubles the slope squared four-fold and exceeds one
        let got = family_angle_sq(&curve, 2.0, s1, &POLICY);
        assert!(got > 1.0, "lambda = 2 angle^2 = {got} should exceed 1");
    }

    #[test]
    fn recover_identity_member_datum() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let datum = recover_datum(&chart, 1.0, 1.0, SignBranch::Plus).unwrap();
        let (s_lo, s_hi) = datum.s_domain();
        let mut max = 0.0f64;
        for i in 0..40 {
            let s = s_lo + (s_hi - s_lo) * (0.02 + 0.96 * i as f64 / 39.0);
            let u = chart.u_of_s(s);
            max = max.max((datum.radius(s) - seed.radius.value(u)).abs());
            max = max.max((datum.height(s) - seed.height.value(u)).abs());
            max = max.max((datum.twist(s) - chart.theta_at(u)).abs());
        }
        assert!(max < 1e-8, "identity datum deviates by {max}");
    }

    #[test]
    fn recover_pitch_zero_drops_twist() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let datum = recover_datum(&chart, 1.0, 0.0, SignBranch::Plus).unwrap();
        let (s_lo, s_hi) = datum.s_domain();
        for i in 0..20 {
            let s = s_lo + (s_hi - s_lo) * i as f64 / 19.0;
            let bu = chart.bour_u(s);
            assert!((datum.radius(s) - bu).abs() < 1e-12);
            assert!((datum.twist(s) - datum.twist(s_lo)).abs() < 1e-12);
        }
        // the patch is a surface of revolution: z does not depend on t
        let patch = family_patch(&datum);
        let s = 0.5 * (s_lo + s_hi);
        let z0 = patch.position_unchecked(s, 0.3).z;
        let z1 = patch.position_unchecked(s, 4.9).z;
        assert!((z0 - z1).abs() < 1e-12);
    }

    #[test]
    fn recover_rejects_impossible_scale() {
        // U(s) = s on [1, 2]: 1 - lambda^2 (dU/ds)^2 = -3 < 0 for lambda = 2
        let chart = build_bour_chart(&disk_seed((1.0, 2.0)), 256).unwrap();
        let err = recover_datum(&chart, 2.0, 0.0, SignBranch::Plus).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { .. }), "{err:?}");
        let msg = err.to_string();
        assert!(msg.contains("lambda"), "{msg}");
    }

    #[test]
    fn scaled_member_exists_on_trimmed_domain() {
        // lambda = 2 on a translator chart survives only where 4 (dU/ds)^2 < 1
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let datum = recover_datum(&chart, 2.0, 0.5, SignBranch::Plus).unwrap();
        let (u_lo, _) = datum.u_param_domain();
        // valid from roughly U = sqrt(3) upward (where (dU/ds)^2 = 1/4)
        assert!(
            chart.bour_u_at(u_lo) > 1.6,
            "u_lo maps to U = {}",
            chart.bour_u_at(u_lo)
        );
    }

    #[test]
    fn family_patch_is_isometric_to_seed() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        for (lambda, pitch) in [(1.0, 1.0), (1.0, 0.5), (1.0, 0.0), (2.0, 0.3)] {
            let datum = recover_datum(&chart, lambda, pitch, SignBranch::Plus).unwrap();
            let patch = family_patch(&datum);
            let (s_lo, s_hi) = datum.s_domain();
            let mut max = 0.0f64;
            for i in 0..20 {
                for j in 0..20 {
                    let s = s_lo + (s_hi - s_lo) * (0.05 + 0.9 * i as f64 / 19.0);
                    let t = 0.3 + 5.5 * j as f64 / 19.0;
                    let m = patch
                        .first_fundamental_form(s, t, JetMode::Numeric, &POLICY)
                        .unwrap();
                    let bu = chart.bour_u(s);
                    max = max
                        .max((m.e - 1.0).abs())
                        .max(m.f.abs())
                        .max((m.g - bu * bu).abs());
                }
            }
            assert!(
                max < 1e-5,
                "(lambda, h) = ({lambda}, {pitch}): residual {max}"
            );
        }
    }

    #[test]
    fn identity_member_position_match() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let datum = recover_datum(&chart, 1.0, 1.0, SignBranch::Plus).unwrap();
        let deformed = family_patch(&datum);
        let reference = chart.bour_patch();
        let (s_lo, s_hi) = datum.s_domain();
        let mut max = 0.0f64;
        for i in 0..20 {
            for j in 0..8 {
                let s = s_lo + (s_hi - s_lo) * (0.05 + 0.9 * i as f64 / 19.0);
                let t = 6.0 * j as f64 / 7.0;
                let a = deformed.position_unchecked(s, t);
                let b = reference.position_unchecked(s, t);
                max = max.max((a - b).norm());
            }
        }
        assert!(max < 1e-7, "identity member deviates by {max}");
    }

    #[test]
    fn angle_transport_between_formula_and_patch() {
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let curve = chart.bour_curve();
        for (lambda, pitch) in [(1.0, 1.0), (1.0, 0.25), (2.0, 0.2)] {
            let datum = recover_datum(&chart, lambda, pitch, SignBranch::Plus).unwrap();
            let patch = family_patch(&datum);
            let (s_lo, s_hi) = datum.s_domain();
            for i in 0..12 {
                let s = s_lo + (s_hi - s_lo) * (0.08 + 0.84 * i as f64 / 11.0);
                let (_, n3) = patch
                    .unit_normal_and_angle(s, 1.1, JetMode::Numeric, &POLICY)
                    .unwrap();
                let want = family_angle_sq(&curve, lambda, s, &POLICY);
                assert!(
                    (n3 * n3 - want).abs() < 1e-5,
                    "(lambda, h) = ({lambda}, {pitch}) at s = {s}: {} vs {want}",
                    n3 * n3
                );
            }
        }
    }

    #[test]
    fn family_curvature_is_intrinsic() {
        // K of any member equals -U''/U of the shared Bour function, so the
        // lambda = 2 member keeps the seed curvature while its angle function
        // scales, and the translator identity fails for it
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let datum = recover_datum(&chart, 2.0, 0.5, SignBranch::Plus).unwrap();
        let patch = family_patch(&datum);
        let curve = chart.bour_curve();
        let (s_lo, s_hi) = datum.s_domain();
        let mut translator_residual = 0.0f64;
        for i in 0..10 {
            let s = s_lo + (s_hi - s_lo) * (0.15 + 0.7 * i as f64 / 9.0);
            let ff = patch
                .fundamental_forms(s, 0.8, JetMode::Numeric, &POLICY)
                .unwrap();
            let k_warped = warped_metric_curvature(&curve, s, &POLICY).unwrap();
            assert!(
                (ff.k - k_warped).abs() < 1e-5,
                "intrinsic curvature mismatch at s = {s}: {} vs {k_warped}",
                ff.k
            );
            translator_residual = translator_residual.max((ff.k - ff.n3.powi(4)).abs());
        }
        assert!(
            translator_residual > 1e-3,
            "lambda = 2 member must fail the translator identity, residual {translator_residual}"
        );
    }

    #[test]
    fn seed_chart_arc_matches_first_integral() {
        // for the (c, h) member seed, ds/du = sqrt(U^2 + c)
        let (surface, seed) = member_seed(2.0, 0.5);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let (lo, hi) = surface.u_domain();
        let want = integrate_adaptive(&|u: f64| (u * u + 2.0).sqrt(), lo, hi, 1e-12);
        assert!((chart.s_of_u(hi) - want).abs() < 1e-9);
    }

    #[test]
    fn bour_patch_reparametrizes_the_seed() {
        // (s, t) and (u, theta) describe the same set of points:
        // X(s, t) = seed(u(s), t - Theta(u(s)))
        let (_, seed) = member_seed(1.0, 1.0);
        let chart = build_bour_chart(&seed, 512).unwrap();
        let bour = chart.bour_patch();
        let direct = seed.patch();
        let (s_lo, s_hi) = chart.s_domain();
        for i in 0..25 {
            let s = s_lo + (s_hi - s_lo) * i as f64 / 24.0;
            let t = 0.23 * i as f64;
            let u = chart.u_of_s(s);
            let theta = t - chart.theta_at(u);
            let a = bour.position_unchecked(s, t);
            let b = direct.position_unchecked(u, theta);
            assert!((a - b).norm() < 1e-11, "mismatch at s = {s}");
        }
    }
}
