//! Grid-based residual checks with machine-readable reports.
//!
//! Each check samples a residual on an interior grid and reports the maximum,
//! its location, the tolerance and a pass flag.  Samples where the pointwise
//! operations fail (degenerate metric, margin too small) are skipped and
//! counted; a check fails when more than one percent of its samples were
//! skipped, so silent exclusions cannot mask domain errors.  Reports are
//! deterministic: random probes draw from a fixed, documented seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bour::{family_angle_sq, BourChart};
use crate::error::{Error, Result};
use crate::family::{
    build_helicoidal, screw_motion, FamilyParams, TranslatorSurface, DEFAULT_GRID_N,
};
use crate::surface::{JetMode, ParametricPatch, Rect, StepPolicy, Vec3};

/// Seed for every randomized probe in this module.
pub const SAMPLE_SEED: u64 = 0x6865_6c69; // "heli"

/// Fraction of samples that may be skipped before a check fails.
pub const MAX_SKIP_FRACTION: f64 = 0.01;

/// Tolerances used by [`full_suite`] and the acceptance checks.
pub mod tolerances {
    pub const TRANSLATOR_ANALYTIC: f64 = 1e-8;
    pub const TRANSLATOR_FD: f64 = 1e-4;
    pub const METRIC: f64 = 1e-5;
    pub const ISOMETRY: f64 = 2e-5;
    pub const ANGLE: f64 = 1e-5;
    pub const SCREW: f64 = 1e-9;
    pub const MONGE_AMPERE_ANALYTIC: f64 = 1e-10;
    pub const MONGE_AMPERE_FD: f64 = 1e-5;
    pub const FAMILY_ISOMETRY: f64 = 1e-5;
    pub const FAMILY_ANGLE: f64 = 1e-5;
}

/// Sampling grid: counts, fractional interior inset and an optional window
/// overriding the patch domain.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub n_u: usize,
    pub n_v: usize,
    pub margin: f64,
    pub window: Option<Rect>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_u: 40,
            n_v: 40,
            margin: 0.05,
            window: None,
        }
    }
}

impl GridSpec {
    pub fn new(n_u: usize, n_v: usize, margin: f64) -> Self {
        GridSpec {
            n_u,
            n_v,
            margin,
            window: None,
        }
    }

    pub fn with_window(mut self, window: Rect) -> Self {
        self.window = Some(window);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_u < 4 || self.n_v < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid must be at least 4 x 4, got {} x {}",
                self.n_u, self.n_v
            )));
        }
        if !(0.0..0.5).contains(&self.margin) {
            return Err(Error::InvalidArgument(format!(
                "margin must lie in [0, 0.5), got {}",
                self.margin
            )));
        }
        Ok(())
    }

    /// Sample coordinates over `base` (or the window when set), inset by the
    /// margin on each side.
    pub fn sample_axes(&self, base: Rect) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let rect = self.window.unwrap_or(base);
        let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let f = self.margin + (1.0 - 2.0 * self.margin) * i as f64 / (n - 1) as f64;
                    lo + (hi - lo) * f
                })
                .collect()
        };
        Ok((
            axis(rect.u_min, rect.u_max, self.n_u),
            axis(rect.v_min, rect.v_max, self.n_v),
        ))
    }
}

/// Outcome of one check: maximum residual over the grid with its location.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub check: String,
    pub grid: GridSpec,
    pub tolerance: f64,
    pub max_residual: f64,
    pub argmax: (f64, f64),
    pub passed: bool,
    /// Check was not applicable to the input (and counts as passed).
    pub skipped: bool,
    pub samples_total: usize,
    pub samples_skipped: usize,
    /// Per-sample residuals in row-major order, when requested.
    pub residuals: Option<Vec<f64>>,
    /// Jet mode and step policy the residuals were computed with.
    pub note: String,
}

impl VerificationReport {
    fn from_samples(
        check: &str,
        grid: GridSpec,
        tolerance: f64,
        samples: &[ResidualSample],
        samples_total: usize,
        keep_residuals: bool,
        note: String,
    ) -> Self {
        let mut max_residual = 0.0;
        let mut argmax = (f64::NAN, f64::NAN);
        for &(u, v, r) in samples {
            if r >= max_residual {
                max_residual = r;
                argmax = (u, v);
            }
        }
        let samples_skipped = samples_total - samples.len();
        let skip_ok = (samples_skipped as f64) <= MAX_SKIP_FRACTION * samples_total as f64;
        VerificationReport {
            check: check.to_string(),
            grid,
            tolerance,
            max_residual,
            argmax,
            passed: max_residual <= tolerance && skip_ok && !samples.is_empty(),
            skipped: false,
            samples_total,
            samples_skipped,
            residuals: keep_residuals.then(|| samples.iter().map(|s| s.2).collect()),
            note,
        }
    }

    fn not_applicable(check: &str, grid: GridSpec, tolerance: f64, note: String) -> Self {
        VerificationReport {
            check: check.to_string(),
            grid,
            tolerance,
            max_residual: 0.0,
            argmax: (f64::NAN, f64::NAN),
            passed: true,
            skipped: true,
            samples_total: 0,
            samples_skipped: 0,
            residuals: None,
            note,
        }
    }
}

/// `(u, v, residual)` triple of one grid sample.
type ResidualSample = (f64, f64, f64);

fn sweep_patch(
    patch: &ParametricPatch,
    grid: &GridSpec,
    residual: impl Fn(f64, f64) -> Result<f64>,
) -> Result<(Vec<ResidualSample>, usize)> {
    let (us, vs) = grid.sample_axes(patch.domain())?;
    let mut samples = Vec::with_capacity(us.len() * vs.len());
    for &u in &us {
        for &v in &vs {
            if let Ok(r) = residual(u, v) {
                samples.push((u, v, r));
            }
        }
    }
    Ok((samples, us.len() * vs.len()))
}

fn mode_note(mode: JetMode, patch: &ParametricPatch, policy: &StepPolicy) -> String {
    let effective = match mode {
        JetMode::Auto if patch.has_analytic_jet() => "analytic",
        JetMode::Auto | JetMode::Numeric => "numeric",
        JetMode::Analytic => "analytic",
    };
    format!(
        "jets={effective} steps=({:.1e},{:.1e})",
        policy.first_min, policy.second_min
    )
}

/// Translator identity `K = n3^4`; residual `|K - n3^4|`.
pub fn check_translator(
    surface: &TranslatorSurface,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    check_translator_mode(surface, grid, tol, JetMode::Auto)
}

pub fn check_translator_mode(
    surface: &TranslatorSurface,
    grid: &GridSpec,
    tol: f64,
    mode: JetMode,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    let patch = surface.patch();
    let (samples, total) = sweep_patch(patch, grid, |u, v| {
        let ff = patch.fundamental_forms(u, v, mode, &policy)?;
        Ok((ff.k - ff.n3.powi(4)).abs())
    })?;
    Ok(VerificationReport::from_samples(
        "translator",
        grid.clone(),
        tol,
        &samples,
        total,
        false,
        mode_note(mode, patch, &policy),
    ))
}

/// Metric identity `(E, F, G) = (U^2 + c, 0, U^2)` in geometric coordinates.
pub fn check_metric(
    surface: &TranslatorSurface,
    c: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    if surface.is_cylinder() {
        return Ok(VerificationReport::not_applicable(
            "metric",
            grid.clone(),
            tol,
            "not applicable: the cylinder has no first-integral chart".into(),
        ));
    }
    let patch = surface.patch();
    let (samples, total) = sweep_patch(patch, grid, |u, v| {
        let m = patch.first_fundamental_form(u, v, JetMode::Auto, &policy)?;
        Ok((m.e - (u * u + c))
            .abs()
            .max(m.f.abs())
            .max((m.g - u * u).abs()))
    })?;
    Ok(VerificationReport::from_samples(
        "metric",
        grid.clone(),
        tol,
        &samples,
        total,
        false,
        mode_note(JetMode::Auto, patch, &policy),
    ))
}

/// Metric agreement of two members at matched `(U, t)` on their common
/// window.
pub fn check_isometry(
    a: &TranslatorSurface,
    b: &TranslatorSurface,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    let (a_lo, a_hi) = a.u_domain();
    let (b_lo, b_hi) = b.u_domain();
    let lo = a_lo.max(b_lo);
    let hi = a_hi.min(b_hi);
    if !(lo < hi) {
        return Err(Error::NoCommonWindow(format!(
            "[{a_lo}, {a_hi}] and [{b_lo}, {b_hi}] do not overlap"
        )));
    }
    let da = a.patch().domain();
    let db = b.patch().domain();
    let window = Rect::new(lo, hi, da.v_min.max(db.v_min), da.v_max.min(db.v_max));
    let grid_w = grid.clone().with_window(window);
    let (pa, pb) = (a.patch(), b.patch());
    let (samples, total) = sweep_patch(pa, &grid_w, |u, v| {
        let ma = pa.first_fundamental_form(u, v, JetMode::Auto, &policy)?;
        let mb = pb.first_fundamental_form(u, v, JetMode::Auto, &policy)?;
        Ok((ma.e - mb.e)
            .abs()
            .max((ma.f - mb.f).abs())
            .max((ma.g - mb.g).abs()))
    })?;
    Ok(VerificationReport::from_samples(
        "isometry",
        grid_w,
        tol,
        &samples,
        total,
        false,
        mode_note(JetMode::Auto, pa, &policy),
    ))
}

/// Angle identity `|n3| sqrt(U^2 + c) = 1`.  Skipped for the cylinder, whose
/// vanishing angle function admits no such chart.
pub fn check_angle(
    surface: &TranslatorSurface,
    c: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    if surface.is_cylinder() {
        return Ok(VerificationReport::not_applicable(
            "angle",
            grid.clone(),
            tol,
            "not applicable: n3 = 0 on the cylinder".into(),
        ));
    }
    let patch = surface.patch();
    let (samples, total) = sweep_patch(patch, grid, |u, v| {
        let (_, n3) = patch.unit_normal_and_angle(u, v, JetMode::Auto, &policy)?;
        Ok((n3.abs() * (u * u + c).sqrt() - 1.0).abs())
    })?;
    Ok(VerificationReport::from_samples(
        "angle",
        grid.clone(),
        tol,
        &samples,
        total,
        false,
        mode_note(JetMode::Auto, patch, &policy),
    ))
}

/// Height function of a graph `z = f(x, y)` with an optional analytic
/// Hessian `(f_xx, f_xy, f_yy)`.
type HessianFn = dyn Fn(f64, f64) -> (f64, f64, f64) + Send + Sync;

#[derive(Clone)]
pub struct GraphFn {
    value: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    hessian: Option<Arc<HessianFn>>,
}

impl GraphFn {
    pub fn new(value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        GraphFn {
            value: Arc::new(value),
            hessian: None,
        }
    }

    pub fn with_hessian(
        mut self,
        hessian: impl Fn(f64, f64) -> (f64, f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    pub fn hessian(
        &self,
        x: f64,
        y: f64,
        mode: JetMode,
        policy: &StepPolicy,
    ) -> Result<(f64, f64, f64)> {
        match (mode, &self.hessian) {
            (JetMode::Auto, Some(h)) | (JetMode::Analytic, Some(h)) => Ok(h(x, y)),
            (JetMode::Analytic, None) => Err(Error::InvalidArgument(
                "graph has no analytic Hessian".into(),
            )),
            _ => {
                let f = &self.value;
                let d = policy.second_step(x.abs().max(y.abs()));
                let fxx = (f(x + d, y) - 2.0 * f(x, y) + f(x - d, y)) / (d * d);
                let fyy = (f(x, y + d) - 2.0 * f(x, y) + f(x, y - d)) / (d * d);
                let fxy = (f(x + d, y + d) - f(x + d, y - d) - f(x - d, y + d) + f(x - d, y - d))
                    / (4.0 * d * d);
                Ok((fxx, fxy, fyy))
            }
        }
    }
}

/// Radial graph of a rotational member: `f(x, y) = L(r)`, `r = sqrt(x^2 + y^2)`.
pub fn graph_of_rotational(surface: &TranslatorSurface) -> Result<GraphFn> {
    let params = surface
        .params()
        .ok_or_else(|| Error::InvalidArgument("cylinder is not graphical".into()))?;
    if params.h != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "graph resampling needs a rotational member, got pitch {}",
            params.h
        )));
    }
    let datum = surface.datum().expect("members carry a datum").clone();
    let hess_datum = datum.clone();
    Ok(
        GraphFn::new(move |x, y| datum.height(x.hypot(y))).with_hessian(move |x, y| {
            let r = x.hypot(y);
            let lp = hess_datum.height_slope(r);
            let lpp = hess_datum.height_curv(r);
            let r2 = r * r;
            let fxx = lpp * x * x / r2 + lp * y * y / (r2 * r);
            let fyy = lpp * y * y / r2 + lp * x * x / (r2 * r);
            let fxy = (lpp - lp / r) * x * y / r2;
            (fxx, fxy, fyy)
        }),
    )
}

/// Monge–Ampère residual `|f_xx f_yy - f_xy^2 - 1|` over a planar window.
pub fn check_monge_ampere(
    graph: &GraphFn,
    window: Rect,
    grid: &GridSpec,
    tol: f64,
    mode: JetMode,
) -> Result<VerificationReport> {
    if mode == JetMode::Analytic && !graph.has_hessian() {
        return Err(Error::InvalidArgument(
            "graph has no analytic Hessian".into(),
        ));
    }
    let policy = StepPolicy::default();
    let grid_w = grid.clone().with_window(window);
    let (xs, ys) = grid_w.sample_axes(window)?;
    let mut samples = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            if let Ok((fxx, fxy, fyy)) = graph.hessian(x, y, mode, &policy) {
                samples.push((x, y, (fxx * fyy - fxy * fxy - 1.0).abs()));
            }
        }
    }
    let effective = match mode {
        JetMode::Auto if graph.has_hessian() => "analytic",
        JetMode::Auto | JetMode::Numeric => "numeric",
        JetMode::Analytic => "analytic",
    };
    let note = format!(
        "jets={effective} steps=({:.1e},{:.1e})",
        policy.first_min, policy.second_min
    );
    Ok(VerificationReport::from_samples(
        "monge_ampere",
        grid_w,
        tol,
        &samples,
        xs.len() * ys.len(),
        false,
        note,
    ))
}

/// Screw invariance `X(U, t + T) = S_T X(U, t)` at seeded random samples.
pub fn check_screw_invariance(
    surface: &TranslatorSurface,
    pitch: f64,
    n_samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let patch = surface.patch();
    let d = patch.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut samples = Vec::with_capacity(n_samples);
    let u_span = d.u_width();
    for _ in 0..n_samples {
        let u = rng.random_range(d.u_min + 0.02 * u_span..d.u_max - 0.02 * u_span);
        let t = rng.random_range(0.0..0.5 * d.v_width());
        let angle = rng.random_range(0.0..0.5 * d.v_width());
        let a = patch.position_unchecked(u, t + angle);
        let b = screw_motion(patch.position_unchecked(u, t), angle, pitch);
        samples.push((u, t, (a - b).norm()));
    }
    Ok(VerificationReport::from_samples(
        "screw",
        GridSpec::new(n_samples.max(4), 4, 0.0),
        tol,
        &samples,
        n_samples,
        false,
        format!("seed={SAMPLE_SEED:#x} pitch={pitch}"),
    ))
}

/// First fundamental form of a deformed-family patch against the warped
/// form `(1, 0, U^2)` carried by the seed chart.
pub fn check_family_isometry(
    chart: &BourChart,
    patch: &ParametricPatch,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    let (samples, total) = sweep_patch(patch, grid, |s, t| {
        let m = patch.first_fundamental_form(s, t, JetMode::Numeric, &policy)?;
        let bu = chart.bour_u(s);
        Ok((m.e - 1.0).abs().max(m.f.abs()).max((m.g - bu * bu).abs()))
    })?;
    Ok(VerificationReport::from_samples(
        "family_isometry",
        grid.clone(),
        tol,
        &samples,
        total,
        false,
        mode_note(JetMode::Numeric, patch, &policy),
    ))
}

/// Angle transport of the scaled family: the measured `n3^2` of the patch
/// against `lambda^2 (dU/ds)^2` of the seed's Bour function.
pub fn check_family_angle(
    chart: &BourChart,
    lambda: f64,
    patch: &ParametricPatch,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let policy = StepPolicy::default();
    let curve = chart.bour_curve();
    let (samples, total) = sweep_patch(patch, grid, |s, t| {
        let (_, n3) = patch.unit_normal_and_angle(s, t, JetMode::Numeric, &policy)?;
        Ok((n3 * n3 - family_angle_sq(&curve, lambda, s, &policy)).abs())
    })?;
    Ok(VerificationReport::from_samples(
        "family_angle",
        grid.clone(),
        tol,
        &samples,
        total,
        false,
        mode_note(JetMode::Numeric, patch, &policy),
    ))
}

/// Optimal rotation angle about the z-axis minimizing the mean squared
/// distance between paired positions (two-dimensional Procrustes fit).
pub fn align_rotation_z(pairs: &[(Vec3, Vec3)]) -> f64 {
    let mut cross = 0.0;
    let mut dot = 0.0;
    for (p, q) in pairs {
        cross += p.x * q.y - p.y * q.x;
        dot += p.x * q.x + p.y * q.y;
    }
    cross.atan2(dot)
}

/// The full identity suite for one surface, at the documented tolerances.
pub fn full_suite(surface: &TranslatorSurface, grid: &GridSpec) -> Result<Vec<VerificationReport>> {
    use tolerances::*;
    let mut reports = Vec::new();
    reports.push(check_translator_mode(
        surface,
        grid,
        TRANSLATOR_ANALYTIC,
        JetMode::Analytic,
    )?);
    let mut fd = check_translator_mode(surface, grid, TRANSLATOR_FD, JetMode::Numeric)?;
    fd.check = "translator_fd".into();
    reports.push(fd);

    match surface.params() {
        Some(params) => {
            reports.push(check_metric(surface, params.c, grid, METRIC)?);
            let rotational = build_helicoidal(
                FamilyParams::new(params.c, 0.0)?,
                surface.u_domain().1,
                DEFAULT_GRID_N,
            )?;
            reports.push(check_isometry(surface, &rotational, grid, ISOMETRY)?);
            reports.push(check_angle(surface, params.c, grid, ANGLE)?);
            reports.push(check_screw_invariance(surface, params.h, 10, SCREW)?);
            if params.h == 0.0 && params.c == 1.0 {
                let graph = graph_of_rotational(surface)?;
                let window = Rect::new(0.4, 1.6, 0.4, 1.6);
                reports.push(check_monge_ampere(
                    &graph,
                    window,
                    grid,
                    MONGE_AMPERE_ANALYTIC,
                    JetMode::Analytic,
                )?);
                let mut fd =
                    check_monge_ampere(&graph, window, grid, MONGE_AMPERE_FD, JetMode::Numeric)?;
                fd.check = "monge_ampere_fd".into();
                reports.push(fd);
            }
        }
        None => {
            reports.push(check_angle(surface, 0.0, grid, ANGLE)?);
            reports.push(check_screw_invariance(surface, 0.0, 10, SCREW)?);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bour::{build_bour_chart, family_patch, recover_datum, HelicoidalSeed, SignBranch};
    use crate::family::cylinder_translator;

    fn member(c: f64, h: f64) -> TranslatorSurface {
        build_helicoidal(FamilyParams { c, h }, 5.0, 512).unwrap()
    }

    #[test]
    fn translator_check_on_cylinder_is_exact() {
        let cyl = cylinder_translator(1.0).unwrap();
        let r = check_translator(&cyl, &GridSpec::default(), 1e-10).unwrap();
        assert!(r.passed && r.max_residual == 0.0, "{r:?}");
        let r = check_translator(
            &cylinder_translator(2.5).unwrap(),
            &GridSpec::default(),
            1e-10,
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn translator_check_on_members() {
        let r = check_translator_mode(
            &member(1.0, 0.0),
            &GridSpec::default(),
            1e-8,
            JetMode::Analytic,
        )
        .unwrap();
        assert!(r.passed, "paraboloid analytic: {}", r.max_residual);

        let r = check_translator_mode(
            &member(1.0, 1.0),
            &GridSpec::default(),
            1e-4,
            JetMode::Numeric,
        )
        .unwrap();
        assert!(
            r.passed,
            "helicoidal finite differences: {}",
            r.max_residual
        );
    }

    #[test]
    fn metric_check_and_wrong_constant_probe() {
        let para = member(1.0, 0.0);
        let r = check_metric(&para, 1.0, &GridSpec::default(), 1e-6).unwrap();
        assert!(r.passed, "{}", r.max_residual);

        let r = check_metric(&member(2.0, 0.5), 2.0, &GridSpec::default(), 1e-5).unwrap();
        assert!(r.passed, "{}", r.max_residual);

        // |E - (U^2 + 2)| = 1 when the member was built with c = 1
        let r = check_metric(&para, 2.0, &GridSpec::default(), 1e-5).unwrap();
        assert!(!r.passed);
        assert!((r.max_residual - 1.0).abs() < 1e-6, "{}", r.max_residual);
    }

    #[test]
    fn isometry_checks() {
        let para = member(1.0, 0.0);
        let heli = member(1.0, 1.0);
        let r = check_isometry(&para, &heli, &GridSpec::default(), 2e-5).unwrap();
        assert!(r.passed, "{}", r.max_residual);

        let r = check_isometry(&para, &para, &GridSpec::default(), 1e-12).unwrap();
        assert!(r.passed && r.max_residual == 0.0);

        let r = check_isometry(&para, &member(2.0, 0.0), &GridSpec::default(), 2e-5).unwrap();
        assert!(!r.passed);
        assert!((r.max_residual - 1.0).abs() < 1e-6);
    }

    #[test]
    fn angle_checks_and_cylinder_skip() {
        let r = check_angle(&member(1.0, 0.0), 1.0, &GridSpec::default(), 1e-6).unwrap();
        assert!(r.passed && !r.skipped);

        let r = check_angle(&member(1.0, 1.0), 1.0, &GridSpec::default(), 1e-5).unwrap();
        assert!(r.passed && !r.skipped);

        let cyl = cylinder_translator(1.0).unwrap();
        let r = check_angle(&cyl, 1.0, &GridSpec::default(), 1e-5).unwrap();
        assert!(r.skipped && r.passed);
    }

    #[test]
    fn monge_ampere_checks() {
        let window = Rect::new(0.4, 1.6, 0.4, 1.6);

        // solution of the equation: residual at rounding level
        let solution =
            GraphFn::new(|x, y| 0.5 * (x * x + y * y)).with_hessian(|_, _| (1.0, 0.0, 1.0));
        let r = check_monge_ampere(
            &solution,
            window,
            &GridSpec::default(),
            1e-10,
            JetMode::Analytic,
        )
        .unwrap();
        assert!(r.passed && r.max_residual < 1e-14);

        // rotational member resampled as a radial graph, finite differences
        let graph = graph_of_rotational(&member(2.0, 0.0)).unwrap();
        let r = check_monge_ampere(&graph, window, &GridSpec::default(), 1e-4, JetMode::Numeric)
            .unwrap();
        assert!(r.passed, "{}", r.max_residual);
        let r = check_monge_ampere(
            &graph,
            window,
            &GridSpec::default(),
            1e-10,
            JetMode::Analytic,
        )
        .unwrap();
        assert!(r.passed, "{}", r.max_residual);

        // f = x^2 + y^2 fails with residual exactly 3
        let wrong = GraphFn::new(|x, y| x * x + y * y).with_hessian(|_, _| (2.0, 0.0, 2.0));
        let r = check_monge_ampere(
            &wrong,
            window,
            &GridSpec::default(),
            1e-5,
            JetMode::Analytic,
        )
        .unwrap();
        assert!(!r.passed);
        assert!((r.max_residual - 3.0).abs() < 1e-10);

        // pitched members have no graph
        assert!(graph_of_rotational(&member(1.0, 1.0)).is_err());
    }

    #[test]
    fn screw_invariance_checks() {
        let heli = member(1.0, 1.0);
        let r = check_screw_invariance(&heli, 1.0, 10, 1e-9).unwrap();
        assert!(r.passed, "{}", r.max_residual);

        // mismatched pitch shifts z by (2 - 1) T
        let r = check_screw_invariance(&heli, 2.0, 10, 1e-9).unwrap();
        assert!(!r.passed && r.max_residual > 0.1);

        let cyl = cylinder_translator(1.0).unwrap();
        let r = check_screw_invariance(&cyl, 0.0, 10, 1e-9).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn reports_are_deterministic() {
        let heli = member(0.5, 0.5);
        let a = check_screw_invariance(&heli, 0.5, 10, 1e-9).unwrap();
        let b = check_screw_invariance(&heli, 0.5, 10, 1e-9).unwrap();
        assert_eq!(a.max_residual, b.max_residual);
        assert_eq!(a.argmax, b.argmax);
    }

    #[test]
    fn skipped_samples_fail_the_check() {
        // a numeric-jet patch sampled with zero margin loses its boundary
        // rows to the stencil margin; the skip accounting must flag that
        let seed = HelicoidalSeed::from_member(&member(1.0, 1.0)).unwrap();
        let chart = build_bour_chart(&seed, 256).unwrap();
        let datum = recover_datum(&chart, 1.0, 1.0, SignBranch::Plus).unwrap();
        let patch = family_patch(&datum);
        let surface_like = patch.clone();
        let grid = GridSpec::new(20, 20, 0.0);
        let policy = StepPolicy::default();
        let (samples, total) = super::sweep_patch(&surface_like, &grid, |u, v| {
            let ff = surface_like.fundamental_forms(u, v, JetMode::Numeric, &policy)?;
            Ok((ff.k - ff.n3.powi(4)).abs())
        })
        .unwrap();
        let report = VerificationReport::from_samples(
            "translator",
            grid,
            1e-3,
            &samples,
            total,
            false,
            String::new(),
        );
        assert!(report.samples_skipped > 0);
        assert!(!report.passed, "skip fraction must fail the report");
    }

    #[test]
    fn family_checks_across_scales() {
        let seed = HelicoidalSeed::from_member(&member(1.0, 1.0)).unwrap();
        let chart = build_bour_chart(&seed, 512).unwrap();
        let grid = GridSpec::new(16, 8, 0.05);
        for (lambda, pitch) in [(1.0, 1.0), (1.0, 0.25), (2.0, 0.5)] {
            let datum = recover_datum(&chart, lambda, pitch, SignBranch::Plus).unwrap();
            let patch = family_patch(&datum);
            let iso =
                check_family_isometry(&chart, &patch, &grid, tolerances::FAMILY_ISOMETRY).unwrap();
            assert!(
                iso.passed,
                "(lambda, h) = ({lambda}, {pitch}): {}",
                iso.max_residual
            );
            let ang = check_family_angle(&chart, lambda, &patch, &grid, tolerances::FAMILY_ANGLE)
                .unwrap();
            assert!(
                ang.passed,
                "(lambda, h) = ({lambda}, {pitch}): {}",
                ang.max_residual
            );
        }
    }

    #[test]
    fn grid_and_mode_validation() {
        assert!(GridSpec::new(3, 40, 0.05).validate().is_err());
        assert!(GridSpec::new(40, 40, 0.5).validate().is_err());
        assert!(GridSpec::new(40, 40, -0.1).validate().is_err());
        assert!(GridSpec::default().validate().is_ok());

        // an analytic Hessian cannot be demanded where none exists
        let bare = GraphFn::new(|x, y| x * y);
        let r = check_monge_ampere(
            &bare,
            Rect::new(0.0, 1.0, 0.0, 1.0),
            &GridSpec::default(),
            1e-5,
            JetMode::Analytic,
        );
        assert!(r.is_err());
    }

    #[test]
    fn isometry_needs_a_common_window() {
        // windows [eps, 2] and [3, 5] cannot overlap
        let a = build_helicoidal(FamilyParams { c: 1.0, h: 0.0 }, 2.0, 64).unwrap();
        let grid = GridSpec::default();
        let b = {
            // a member living strictly above U = 3
            let full = build_helicoidal(FamilyParams { c: 1.0, h: 3.2 }, 5.0, 64).unwrap();
            assert!(full.u_domain().0 > 3.0);
            full
        };
        assert!(matches!(
            check_isometry(&a, &b, &grid, 1e-5),
            Err(Error::NoCommonWindow(_))
        ));
    }

    #[test]
    fn rotation_alignment_recovers_known_angle() {
        use crate::surface::Vec3;
        let alpha = 0.37;
        let pairs: Vec<(Vec3, Vec3)> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.13;
                let p = Vec3::new(
                    t.cos() * (1.0 + 0.1 * t),
                    t.sin() * (1.0 + 0.1 * t),
                    0.3 * t,
                );
                let q = crate::family::screw_motion(p, alpha, 0.0);
                (p, q)
            })
            .collect();
        assert!((align_rotation_z(&pairs) - alpha).abs() < 1e-12);
    }

    #[test]
    fn full_suite_passes_for_the_parameter_sample_set() {
        for c in [0.5, 1.0, 2.0] {
            for h in [0.0, 0.5, 1.0] {
                let reports = full_suite(&member(c, h), &GridSpec::default()).unwrap();
                for r in &reports {
                    assert!(
                        r.passed,
                        "(c, h) = ({c}, {h}), {}: residual {} > {}",
                        r.check, r.max_residual, r.tolerance
                    );
                }
            }
        }
    }
}
