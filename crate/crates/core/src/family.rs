//! The explicit moduli of rotational and helicoidal translators.
//!
//! In the arc coordinate `s` of the warped metric `ds^2 + U^2 dt^2` the
//! translator condition `K = n3^4` reduces to the ordinary differential
//! equation `-U''/U = (U')^4`, whose first integral is
//! `ds^2 = (U^2 + c) dU^2` for a constant `c`.  Re-expressing the generating
//! data in the coordinate `U` gives, for a member of pitch `h`,
//!
//! ```text
//! R(U)^2      = U^2 - h^2
//! (dL/dU)^2   = U^2 Q(U) / (U^2 - h^2)^2
//! (dT/dU)^2   = h^2 Q(U) / (U^2 (U^2 - h^2)^2)
//! Q(U)        = U^4 + (c - 1 - h^2) U^2 - h^2 c
//! ```
//!
//! with the height `L` and twist `T` fixed here on the positive branch and
//! `dT = (h / U^2) dL`.  Pitch zero members are surfaces of revolution whose
//! heights integrate in closed form; the module also provides the cylinder
//! branch (constant `U`), the vertical screw motion, the deformation path in
//! `h` at fixed `c`, and the ODE residual used as an independent oracle.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{graded_knots, uniform_knots, CumTable};
use crate::surface::{Jet, ParametricPatch, Rect, ScalarCurve, StepPolicy, Vec3};

/// Fraction of the working width reserved as an endpoint inset, keeping
/// evaluation away from the zeros of the radicands.
pub const DOMAIN_INSET_FRACTION: f64 = 1e-3;

/// Default cap on the `U` coordinate.
pub const DEFAULT_U_CAP: f64 = 5.0;

/// Default knot count for generating-data tables.
pub const DEFAULT_GRID_N: usize = 512;

/// First-integral constant and pitch of one helicoidal member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    /// First-integral constant `c`; labels the isometry class.
    pub c: f64,
    /// Pitch `h` of the screw motion; `0` gives a surface of revolution.
    pub h: f64,
}

impl FamilyParams {
    pub fn new(c: f64, h: f64) -> Result<Self> {
        if !c.is_finite() || !h.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "parameters must be finite, got c = {c}, h = {h}"
            )));
        }
        Ok(FamilyParams { c, h })
    }

    /// `sqrt(|c - 1|)` when `c != 1`.
    pub fn kappa(&self) -> Option<f64> {
        if self.c == 1.0 {
            None
        } else {
            Some((self.c - 1.0).abs().sqrt())
        }
    }

    /// The quartic radicand `Q(U)` shared by the height and twist slopes.
    pub fn q_at(&self, u: f64) -> f64 {
        let (c, h2) = (self.c, self.h * self.h);
        let u2 = u * u;
        u2 * u2 + (c - 1.0 - h2) * u2 - h2 * c
    }

    pub fn q_slope(&self, u: f64) -> f64 {
        let (c, h2) = (self.c, self.h * self.h);
        4.0 * u * u * u + 2.0 * (c - 1.0 - h2) * u
    }

    /// Largest root of `Q` as a quadratic in `U^2`; `Q >= 0` on `[root, inf)`.
    ///
    /// The discriminant rearranges to `(c + h^2 - 1)^2 + 4 h^2`, so it is
    /// never negative; the summation order avoids cancellation for `c` large.
    pub fn q_positive_root(&self) -> f64 {
        let (c, h2) = (self.c, self.h * self.h);
        let a = c - 1.0 - h2;
        let disc = (c + h2 - 1.0) * (c + h2 - 1.0) + 4.0 * h2;
        let sq = disc.sqrt();
        let v = if a <= 0.0 {
            0.5 * (sq - a)
        } else {
            2.0 * h2 * c / (sq + a)
        };
        v.max(0.0).sqrt()
    }
}

/// Closed interval of `U` on which a member is built.
#[derive(Clone, Copy, Debug)]
pub struct DomainBounds {
    /// Infimum allowed by the constraints, before the inset.
    pub raw_min: f64,
    /// Working lower bound `raw_min + inset`.
    pub u_min: f64,
    /// Working upper bound (the requested cap).
    pub u_max: f64,
}

impl DomainBounds {
    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }
}

/// Working `U` interval for the member `(c, h)` capped at `u_cap`.
///
/// The lower bound is the largest of `|h|` (real radius), `sqrt(max(0, -c))`
/// (positive metric) and the positive root of `Q` (real height and twist),
/// inset by [`DOMAIN_INSET_FRACTION`] of the remaining width.  `None` when
/// the constraints leave no room below the cap.
pub fn domain_bounds(params: &FamilyParams, u_cap: f64) -> Option<DomainBounds> {
    if !(u_cap > 0.0) {
        return None;
    }
    let raw_min = params
        .q_positive_root()
        .max(params.h.abs())
        .max((-params.c).max(0.0).sqrt());
    if raw_min >= u_cap {
        return None;
    }
    let inset = DOMAIN_INSET_FRACTION * (u_cap - raw_min);
    let u_min = raw_min + inset;
    if u_min >= u_cap {
        return None;
    }
    Some(DomainBounds {
        raw_min,
        u_min,
        u_max: u_cap,
    })
}

/// Closed-form height of the rotational member with first integral `c`.
///
/// Solves `dL/dU = sqrt(U^2 + c - 1)` with `L` vanishing at the left end of
/// the case domain:
///
/// * `c = 1 + k^2`: `L = (U sqrt(U^2 + k^2) + k^2 asinh(U / k)) / 2`, `U >= 0`
/// * `c = 1`:       `L = U^2 / 2`, `U >= 0`
/// * `c = 1 - k^2`: `L = (U sqrt(U^2 - k^2) - k^2 acosh(U / k)) / 2`, `U >= k`
pub fn rotational_profile(c: f64, u: f64) -> Result<f64> {
    if !c.is_finite() || !u.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite arguments c = {c}, u = {u}"
        )));
    }
    if c == 1.0 {
        if u < 0.0 {
            return Err(Error::Domain(format!(
                "profile for c = 1 needs U >= 0, got {u}"
            )));
        }
        return Ok(0.5 * u * u);
    }
    let k2 = (c - 1.0).abs();
    let k = k2.sqrt();
    if c > 1.0 {
        if u < 0.0 {
            return Err(Error::Domain(format!(
                "profile for c > 1 needs U >= 0, got {u}"
            )));
        }
        Ok(0.5 * (u * (u * u + k2).sqrt() + k2 * (u / k).asinh()))
    } else {
        if u < k {
            return Err(Error::Domain(format!(
                "profile for c < 1 needs U >= kappa = {k}, got {u}"
            )));
        }
        Ok(0.5 * (u * (u * u - k2).sqrt() - k2 * (u / k).acosh()))
    }
}

/// `dL/dU = sqrt(U^2 + c - 1)` of the rotational profile.
pub fn rotational_profile_slope(c: f64, u: f64) -> Result<f64> {
    let r = u * u + c - 1.0;
    if r < 0.0 {
        return Err(Error::Domain(format!(
            "slope radicand U^2 + c - 1 = {r} negative at U = {u}"
        )));
    }
    Ok(r.sqrt())
}

/// How the height of a member is evaluated.
#[derive(Clone, Debug)]
enum HeightValue {
    /// Closed form, pitch-zero members only.
    Closed,
    /// Cumulative quadrature table of the height slope.
    Table(CumTable),
}

/// Generating data `R(U), L(U), T(U)` of one member.
#[derive(Clone, Debug)]
pub struct MemberDatum {
    params: FamilyParams,
    height: HeightValue,
    /// `None` exactly when `h = 0` (zero twist).
    twist: Option<CumTable>,
}

impl MemberDatum {
    pub fn params(&self) -> FamilyParams {
        self.params
    }

    /// Radius `R(U) = sqrt(U^2 - h^2)`.
    pub fn radius(&self, u: f64) -> f64 {
        (u * u - self.params.h * self.params.h).max(0.0).sqrt()
    }

    pub fn radius_slope(&self, u: f64) -> f64 {
        u / self.radius(u)
    }

    pub fn radius_curv(&self, u: f64) -> f64 {
        let r = self.radius(u);
        -self.params.h * self.params.h / (r * r * r)
    }

    /// Height `L(U)`.
    pub fn height(&self, u: f64) -> f64 {
        match &self.height {
            HeightValue::Closed => rotational_profile(self.params.c, u).unwrap_or(f64::NAN),
            HeightValue::Table(t) => t.eval(u),
        }
    }

    /// Height slope `dL/dU = U sqrt(Q) / (U^2 - h^2)`, positive branch.
    pub fn height_slope(&self, u: f64) -> f64 {
        let q = self.params.q_at(u).max(0.0);
        let r2 = u * u - self.params.h * self.params.h;
        u * q.sqrt() / r2
    }

    /// `d^2 L / dU^2` from the logarithmic derivative of the slope.
    pub fn height_curv(&self, u: f64) -> f64 {
        let q = self.params.q_at(u);
        let r2 = u * u - self.params.h * self.params.h;
        self.height_slope(u) * (1.0 / u + self.params.q_slope(u) / (2.0 * q) - 2.0 * u / r2)
    }

    /// Twist `T(U)`; identically zero for pitch-zero members.
    pub fn twist(&self, u: f64) -> f64 {
        match &self.twist {
            None => 0.0,
            Some(t) => t.eval(u),
        }
    }

    /// `dT/dU = (h / U^2) dL/dU`.
    pub fn twist_slope(&self, u: f64) -> f64 {
        if self.twist.is_none() {
            return 0.0;
        }
        self.params.h / (u * u) * self.height_slope(u)
    }

    pub fn twist_curv(&self, u: f64) -> f64 {
        if self.twist.is_none() {
            return 0.0;
        }
        let h = self.params.h;
        h / (u * u) * self.height_curv(u) - 2.0 * h / (u * u * u) * self.height_slope(u)
    }
}

/// Branch of the moduli a surface belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurfaceKind {
    /// Constant Bour function: circular cylinder, `K = 0 = n3`.
    Cylinder { radius: f64 },
    /// Helicoidal member with the given first integral and pitch.
    Member { params: FamilyParams },
}

/// A constructed translator: patch in geometric coordinates plus its
/// generating data.
#[derive(Clone, Debug)]
pub struct TranslatorSurface {
    kind: SurfaceKind,
    datum: Option<MemberDatum>,
    patch: ParametricPatch,
    u_domain: (f64, f64),
}

impl TranslatorSurface {
    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn params(&self) -> Option<FamilyParams> {
        match self.kind {
            SurfaceKind::Member { params } => Some(params),
            SurfaceKind::Cylinder { .. } => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            SurfaceKind::Cylinder { radius } => Some(radius),
            SurfaceKind::Member { .. } => None,
        }
    }

    pub fn is_cylinder(&self) -> bool {
        matches!(self.kind, SurfaceKind::Cylinder { .. })
    }

    pub fn patch(&self) -> &ParametricPatch {
        &self.patch
    }

    pub fn datum(&self) -> Option<&MemberDatum> {
        self.datum.as_ref()
    }

    /// The first-parameter interval of the patch (`U` for members, height for
    /// the cylinder).
    pub fn u_domain(&self) -> (f64, f64) {
        self.u_domain
    }

    /// Arc chart `s(U)` of a member, for ODE-residual oracles.
    pub fn arc_chart(&self, grid_n: usize) -> Result<ArcChart> {
        match self.kind {
            SurfaceKind::Member { params } => {
                ArcChart::new(params.c, self.u_domain.0, self.u_domain.1, grid_n)
            }
            SurfaceKind::Cylinder { .. } => Err(Error::InvalidArgument(
                "arc chart requires a helicoidal member".into(),
            )),
        }
    }
}

fn member_patch(datum: MemberDatum, u_domain: (f64, f64), label: String) -> ParametricPatch {
    let d_pos = datum.clone();
    let h = datum.params().h;
    let position = Arc::new(move |u: f64, t: f64| {
        let r = d_pos.radius(u);
        let phi = t - d_pos.twist(u);
        Vec3::new(r * phi.cos(), r * phi.sin(), d_pos.height(u) + h * phi)
    });
    let d_jet = datum;
    let jet = Arc::new(move |u: f64, t: f64| {
        let r = d_jet.radius(u);
        let rp = d_jet.radius_slope(u);
        let rpp = d_jet.radius_curv(u);
        let lp = d_jet.height_slope(u);
        let lpp = d_jet.height_curv(u);
        let tp = d_jet.twist_slope(u);
        let tpp = d_jet.twist_curv(u);
        let phi = t - d_jet.twist(u);
        let (sin, cos) = phi.sin_cos();
        Jet {
            xu: Vec3::new(
                rp * cos + r * tp * sin,
                rp * sin - r * tp * cos,
                lp - h * tp,
            ),
            xv: Vec3::new(-r * sin, r * cos, h),
            xuu: Vec3::new(
                rpp * cos + 2.0 * rp * tp * sin + r * tpp * sin - r * tp * tp * cos,
                rpp * sin - 2.0 * rp * tp * cos - r * tpp * cos - r * tp * tp * sin,
                lpp - h * tpp,
            ),
            xuv: Vec3::new(-rp * sin + r * tp * cos, rp * cos + r * tp * sin, 0.0),
            xvv: Vec3::new(-r * cos, -r * sin, 0.0),
        }
    });
    ParametricPatch::with_jet(
        label,
        Rect::new(u_domain.0, u_domain.1, 0.0, 2.0 * PI),
        position,
        jet,
    )
}

/// Rotational member with closed-form height, in coordinates `(U, t)`.
pub fn rotational_surface(c: f64, u_cap: f64) -> Result<TranslatorSurface> {
    let params = FamilyParams::new(c, 0.0)?;
    let bounds = domain_bounds(&params, u_cap).ok_or_else(|| {
        Error::EmptyDomain(format!(
            "rotational member c = {c} has no domain below {u_cap}"
        ))
    })?;
    let datum = MemberDatum {
        params,
        height: HeightValue::Closed,
        twist: None,
    };
    let u_domain = (bounds.u_min, bounds.u_max);
    let patch = member_patch(datum.clone(), u_domain, format!("rotational(c={c})"));
    Ok(TranslatorSurface {
        kind: SurfaceKind::Member { params },
        datum: Some(datum),
        patch,
        u_domain,
    })
}

/// Helicoidal member `(c, h)` built by quadrature of the generating data.
///
/// The height and twist are integrated on a knot grid graded toward the
/// lower bound when the quartic `Q` vanishes there.  Pitch-zero members
/// reduce to the rotational surface: zero twist, and the height anchored to
/// the closed-form profile.
pub fn build_helicoidal(
    params: FamilyParams,
    u_cap: f64,
    grid_n: usize,
) -> Result<TranslatorSurface> {
    if grid_n < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least 16, got {grid_n}"
        )));
    }
    let bounds = domain_bounds(&params, u_cap).ok_or_else(|| {
        Error::EmptyDomain(format!(
            "member c = {}, h = {} has no domain below U = {u_cap} \
             (needs U > max(|h|, sqrt(-c), Q-root) = {:.6})",
            params.c,
            params.h,
            params
                .q_positive_root()
                .max(params.h.abs())
                .max((-params.c).max(0.0).sqrt())
        ))
    })?;

    let u_q = params.q_positive_root();
    let knots = if u_q > 0.0 && (u_q - bounds.raw_min).abs() < 1e-12 * u_cap {
        graded_knots(bounds.u_min, bounds.u_max, bounds.raw_min, grid_n)
    } else {
        uniform_knots(bounds.u_min, bounds.u_max, grid_n)
    };

    let slope_datum = MemberDatum {
        params,
        height: HeightValue::Closed, // placeholder; only slopes are used below
        twist: None,
    };
    let height_anchor = if params.h == 0.0 {
        rotational_profile(params.c, bounds.u_min)?
    } else {
        0.0
    };
    let sd = slope_datum.clone();
    let height_table = CumTable::build(
        Arc::new(move |u: f64| sd.height_slope(u)),
        knots.clone(),
        height_anchor,
    )?;

    let twist_table = if params.h == 0.0 {
        None
    } else {
        let sd = slope_datum;
        let h = params.h;
        Some(CumTable::build(
            Arc::new(move |u: f64| h / (u * u) * sd.height_slope(u)),
            knots,
            0.0,
        )?)
    };

    let datum = MemberDatum {
        params,
        height: HeightValue::Table(height_table),
        twist: twist_table,
    };
    let u_domain = (bounds.u_min, bounds.u_max);
    let patch = member_patch(
        datum.clone(),
        u_domain,
        format!("member(c={}, h={})", params.c, params.h),
    );
    Ok(TranslatorSurface {
        kind: SurfaceKind::Member { params },
        datum: Some(datum),
        patch,
        u_domain,
    })
}

/// The cylinder branch: `(r cos t, r sin t, z)` with `K = 0` and `n3 = 0`,
/// so the translator identity holds with both sides zero.
pub fn cylinder_translator(radius: f64) -> Result<TranslatorSurface> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cylinder radius must be positive, got {radius}"
        )));
    }
    let r = radius;
    let position = Arc::new(move |z: f64, t: f64| Vec3::new(r * t.cos(), r * t.sin(), z));
    let jet = Arc::new(move |_z: f64, t: f64| {
        let (sin, cos) = t.sin_cos();
        Jet {
            xu: Vec3::new(0.0, 0.0, 1.0),
            xv: Vec3::new(-r * sin, r * cos, 0.0),
            xuu: Vec3::zeros(),
            xuv: Vec3::zeros(),
            xvv: Vec3::new(-r * cos, -r * sin, 0.0),
        }
    });
    let u_domain = (0.0, 1.0);
    let patch = ParametricPatch::with_jet(
        format!("cylinder(r={radius})"),
        Rect::new(u_domain.0, u_domain.1, 0.0, 2.0 * PI),
        position,
        jet,
    );
    Ok(TranslatorSurface {
        kind: SurfaceKind::Cylinder { radius },
        datum: None,
        patch,
        u_domain,
    })
}

/// Screw motion `S_T`: rotation by `T` about the z-axis composed with the
/// vertical translation by `h T`.
pub fn screw_motion(p: Vec3, angle: f64, pitch: f64) -> Vec3 {
    let (sin, cos) = angle.sin_cos();
    Vec3::new(
        p.x * cos - p.y * sin,
        p.x * sin + p.y * cos,
        p.z + pitch * angle,
    )
}

/// Members of fixed `c` with pitch interpolated linearly from `mu` to
/// `h_target` in `steps` increments (`steps + 1` surfaces, endpoints
/// included).  All members share the metric `(U^2 + c) dU^2 + U^2 dt^2` on
/// the common window.
pub fn deformation_path(
    mu: f64,
    c: f64,
    h_target: f64,
    steps: usize,
    u_cap: f64,
    grid_n: usize,
) -> Result<Vec<TranslatorSurface>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let pitches: Vec<f64> = (0..=steps)
        .map(|i| mu + (h_target - mu) * i as f64 / steps as f64)
        .collect();
    let mut empties = Vec::new();
    for &h in &pitches {
        let params = FamilyParams::new(c, h)?;
        if domain_bounds(&params, u_cap).is_none() {
            empties.push(format!("h = {h}: empty below U = {u_cap}"));
        }
    }
    if !empties.is_empty() {
        let domains: Vec<String> = pitches
            .iter()
            .map(|&h| {
                let params = FamilyParams { c, h };
                match domain_bounds(&params, u_cap) {
                    Some(b) => format!("h = {h}: [{:.6}, {:.6}]", b.u_min, b.u_max),
                    None => format!("h = {h}: empty"),
                }
            })
            .collect();
        return Err(Error::NoCommonWindow(domains.join("; ")));
    }
    pitches
        .into_iter()
        .map(|h| build_helicoidal(FamilyParams { c, h }, u_cap, grid_n))
        .collect()
}

/// Arc chart `s(U)` with `ds/dU = sqrt(U^2 + c)`, anchored at the left end.
#[derive(Clone, Debug)]
pub struct ArcChart {
    c: f64,
    table: CumTable,
}

impl ArcChart {
    pub fn new(c: f64, u_lo: f64, u_hi: f64, grid_n: usize) -> Result<Self> {
        if !(u_lo < u_hi) {
            return Err(Error::InvalidArgument(format!(
                "need u_lo < u_hi, got [{u_lo}, {u_hi}]"
            )));
        }
        if u_lo * u_lo + c <= 0.0 {
            return Err(Error::Domain(format!(
                "U^2 + c must be positive on the chart, violated at U = {u_lo}"
            )));
        }
        let table = CumTable::build(
            Arc::new(move |u: f64| (u * u + c).sqrt()),
            uniform_knots(u_lo, u_hi, grid_n.max(16)),
            0.0,
        )?;
        Ok(ArcChart { c, table })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn s_of_u(&self, u: f64) -> f64 {
        self.table.eval(u)
    }

    pub fn u_of_s(&self, s: f64) -> f64 {
        self.table.invert(s)
    }

    pub fn s_domain(&self) -> (f64, f64) {
        self.table.value_range()
    }

    /// The Bour function `U(s)` as a value-only curve; derivatives are left
    /// to finite differences so the ODE residual stays an independent check.
    pub fn bour_curve(&self) -> ScalarCurve {
        let chart = self.clone();
        ScalarCurve::new(move |s| chart.u_of_s(s))
    }

    /// `U(s)` with analytic derivatives from the first integral.
    pub fn bour_curve_analytic(&self) -> ScalarCurve {
        let chart = self.clone();
        let c = self.c;
        let chart_d1 = self.clone();
        let chart_d2 = self.clone();
        ScalarCurve::new(move |s| chart.u_of_s(s))
            .with_derivative(move |s| {
                let u = chart_d1.u_of_s(s);
                1.0 / (u * u + c).sqrt()
            })
            .with_second(move |s| {
                let u = chart_d2.u_of_s(s);
                let w = u * u + c;
                -u / (w * w)
            })
    }
}

/// Residual `U''/U + (U')^4` of the translator ODE at `s`; vanishes on
/// translator charts and on the cylinder branch.
pub fn ode_residual(u_of_s: &ScalarCurve, s: f64, policy: &StepPolicy) -> f64 {
    let u = u_of_s.value(s);
    let d1 = u_of_s.derivative(s, policy);
    let d2 = u_of_s.second(s, policy);
    d2 / u + d1.powi(4)
}
