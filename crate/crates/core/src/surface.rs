//! Parametric surface patches and numerical differential geometry.
//!
//! A [`ParametricPatch`] is an immutable map `(u, v) -> R^3` over a rectangle,
//! optionally carrying analytic first and second partials.  All classical
//! pointwise quantities are derived from a [`Jet`]: first and second
//! fundamental forms, the unit normal with its vertical component (the angle
//! function), and the Gaussian curvature.  Patches without analytic jets fall
//! back to central finite differences under an explicit [`StepPolicy`], which
//! doubles as an independent oracle for patches that do carry analytic data.

use std::sync::Arc;

use crate::error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

/// Closed parameter rectangle `[u_min, u_max] x [v_min, v_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Self {
        Rect {
            u_min,
            u_max,
            v_min,
            v_max,
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u_min && u <= self.u_max && v >= self.v_min && v <= self.v_max
    }

    pub fn u_width(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn v_width(&self) -> f64 {
        self.v_max - self.v_min
    }
}

/// Central-difference step sizes: `step = max(min_step, rel * |parameter|)`.
///
/// The defaults balance truncation against rounding for double precision at
/// order-one parameter scales: `1e-5` for first derivatives, `1e-4` for
/// second derivatives.
#[derive(Clone, Copy, Debug)]
pub struct StepPolicy {
    pub first_min: f64,
    pub first_rel: f64,
    pub second_min: f64,
    pub second_rel: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy {
            first_min: 1e-5,
            first_rel: 1e-5,
            second_min: 1e-4,
            second_rel: 1e-4,
        }
    }
}

impl StepPolicy {
    pub fn first_step(&self, x: f64) -> f64 {
        self.first_min.max(self.first_rel * x.abs())
    }

    pub fn second_step(&self, x: f64) -> f64 {
        self.second_min.max(self.second_rel * x.abs())
    }
}

/// First and second partial derivatives of a patch at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub xu: Vec3,
    pub xv: Vec3,
    pub xuu: Vec3,
    pub xuv: Vec3,
    pub xvv: Vec3,
}

/// Which derivative data pointwise operations should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JetMode {
    /// Analytic jet when the patch has one, finite differences otherwise.
    #[default]
    Auto,
    /// Analytic jet only; error when absent.
    Analytic,
    /// Central finite differences of the position map.
    Numeric,
}

/// First-fundamental-form coefficients `E, F, G` at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct MetricSample {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl MetricSample {
    /// `EG - F^2`, the squared area element.
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// True at immersion points: `E > 0` and `EG - F^2 > 0`.
    pub fn is_immersion(&self) -> bool {
        self.e > 0.0 && self.det() > 0.0
    }
}

/// Metric, second-form coefficients, Gaussian curvature and angle function.
#[derive(Clone, Copy, Debug)]
pub struct FundamentalForms {
    pub metric: MetricSample,
    /// Second-form coefficients `n . X_uu`, `n . X_uv`, `n . X_vv`.
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// Gaussian curvature `(eg - f^2) / (EG - F^2)`.
    pub k: f64,
    /// Vertical component of the unit normal, in `[-1, 1]`.
    pub n3: f64,
}

type PositionFn = dyn Fn(f64, f64) -> Vec3 + Send + Sync;
type JetFn = dyn Fn(f64, f64) -> Jet + Send + Sync;

/// Immutable parametric patch over a rectangle.
#[derive(Clone)]
pub struct ParametricPatch {
    domain: Rect,
    label: String,
    position: Arc<PositionFn>,
    analytic_jet: Option<Arc<JetFn>>,
}

impl std::fmt::Debug for ParametricPatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametricPatch")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("analytic_jet", &self.analytic_jet.is_some())
            .finish()
    }
}

impl ParametricPatch {
    pub fn new(label: impl Into<String>, domain: Rect, position: Arc<PositionFn>) -> Self {
        ParametricPatch {
            domain,
            label: label.into(),
            position,
            analytic_jet: None,
        }
    }

    pub fn with_jet(
        label: impl Into<String>,
        domain: Rect,
        position: Arc<PositionFn>,
        jet: Arc<JetFn>,
    ) -> Self {
        ParametricPatch {
            domain,
            label: label.into(),
            position,
            analytic_jet: Some(jet),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn has_analytic_jet(&self) -> bool {
        self.analytic_jet.is_some()
    }

    /// Position at `(u, v)`; errors outside the domain rectangle.
    pub fn evaluate(&self, u: f64, v: f64) -> Result<Vec3> {
        if !self.domain.contains(u, v) {
            return Err(Error::Domain(format!(
                "({u}, {v}) outside [{}, {}] x [{}, {}] of patch '{}'",
                self.domain.u_min,
                self.domain.u_max,
                self.domain.v_min,
                self.domain.v_max,
                self.label
            )));
        }
        Ok((self.position)(u, v))
    }

    /// Position without the domain check, for callers that manage their own
    /// windows (screw-motion probes, finite-difference stencils).
    pub fn position_unchecked(&self, u: f64, v: f64) -> Vec3 {
        (self.position)(u, v)
    }

    /// Central-difference jet under `policy`.
    ///
    /// Requires interior margin of at least twice the second-derivative step
    /// on both parameters.
    pub fn numeric_jet(&self, u: f64, v: f64, policy: &StepPolicy) -> Result<Jet> {
        let du1 = policy.first_step(u);
        let dv1 = policy.first_step(v);
        let du2 = policy.second_step(u);
        let dv2 = policy.second_step(v);
        let mu = 2.0 * du1.max(du2);
        let mv = 2.0 * dv1.max(dv2);
        let d = &self.domain;
        if u - mu < d.u_min || u + mu > d.u_max || v - mv < d.v_min || v + mv > d.v_max {
            return Err(Error::Margin(format!(
                "({u}, {v}) needs margin ({mu:.3e}, {mv:.3e}) inside patch '{}'",
                self.label
            )));
        }
        let p = &self.position;
        let p0 = p(u, v);
        let xu = (p(u + du1, v) - p(u - du1, v)) / (2.0 * du1);
        let xv = (p(u, v + dv1) - p(u, v - dv1)) / (2.0 * dv1);
        let xuu = (p(u + du2, v) - 2.0 * p0 + p(u - du2, v)) / (du2 * du2);
        let xvv = (p(u, v + dv2) - 2.0 * p0 + p(u, v - dv2)) / (dv2 * dv2);
        let xuv = (p(u + du2, v + dv2) - p(u + du2, v - dv2) - p(u - du2, v + dv2)
            + p(u - du2, v - dv2))
            / (4.0 * du2 * dv2);
        Ok(Jet {
            xu,
            xv,
            xuu,
            xuv,
            xvv,
        })
    }

    /// Jet according to `mode`.
    pub fn jet(&self, u: f64, v: f64, mode: JetMode, policy: &StepPolicy) -> Result<Jet> {
        match (mode, &self.analytic_jet) {
            (JetMode::Numeric, _) | (JetMode::Auto, None) => self.numeric_jet(u, v, policy),
            (JetMode::Auto, Some(j)) | (JetMode::Analytic, Some(j)) => {
                if !self.domain.contains(u, v) {
                    return Err(Error::Domain(format!(
                        "({u}, {v}) outside domain of patch '{}'",
                        self.label
                    )));
                }
                Ok(j(u, v))
            }
            (JetMode::Analytic, None) => Err(Error::InvalidArgument(format!(
                "patch '{}' has no analytic jet",
                self.label
            ))),
        }
    }

    /// First fundamental form; degenerate samples are returned and can be
    /// recognized through [`MetricSample::is_immersion`].
    pub fn first_fundamental_form(
        &self,
        u: f64,
        v: f64,
        mode: JetMode,
        policy: &StepPolicy,
    ) -> Result<MetricSample> {
        let jet = self.jet(u, v, mode, policy)?;
        Ok(MetricSample {
            e: jet.xu.dot(&jet.xu),
            f: jet.xu.dot(&jet.xv),
            g: jet.xv.dot(&jet.xv),
        })
    }

    /// Unit normal `X_u x X_v / |X_u x X_v|` and its vertical component.
    pub fn unit_normal_and_angle(
        &self,
        u: f64,
        v: f64,
        mode: JetMode,
        policy: &StepPolicy,
    ) -> Result<(Vec3, f64)> {
        let jet = self.jet(u, v, mode, policy)?;
        normal_from_jet(&jet, u, v)
    }

    /// Gaussian curvature via the second fundamental form.
    pub fn gauss_curvature(
        &self,
        u: f64,
        v: f64,
        mode: JetMode,
        policy: &StepPolicy,
    ) -> Result<f64> {
        Ok(self.fundamental_forms(u, v, mode, policy)?.k)
    }

    /// Both fundamental forms, curvature and angle function in one pass.
    pub fn fundamental_forms(
        &self,
        u: f64,
        v: f64,
        mode: JetMode,
        policy: &StepPolicy,
    ) -> Result<FundamentalForms> {
        let jet = self.jet(u, v, mode, policy)?;
        let metric = MetricSample {
            e: jet.xu.dot(&jet.xu),
            f: jet.xu.dot(&jet.xv),
            g: jet.xv.dot(&jet.xv),
        };
        let det = metric.det();
        if det <= 0.0 {
            return Err(Error::Singular(format!(
                "degenerate metric (EG - F^2 = {det:.3e}) at ({u}, {v}) on '{}'",
                self.label
            )));
        }
        let (n, n3) = normal_from_jet(&jet, u, v)?;
        let e = n.dot(&jet.xuu);
        let f = n.dot(&jet.xuv);
        let g = n.dot(&jet.xvv);
        Ok(FundamentalForms {
            metric,
            e,
            f,
            g,
            k: (e * g - f * f) / det,
            n3,
        })
    }
}

fn normal_from_jet(jet: &Jet, u: f64, v: f64) -> Result<(Vec3, f64)> {
    let cross = jet.xu.cross(&jet.xv);
    let norm = cross.norm();
    let scale = jet.xu.norm() * jet.xv.norm();
    if norm <= 1e-12 * scale.max(1e-300) {
        return Err(Error::Singular(format!("X_u x X_v vanishes at ({u}, {v})")));
    }
    let n = cross / norm;
    Ok((n, n.z))
}

/// Scalar function of one variable with optional analytic derivatives.
///
/// Used for Bour functions `U(s)`, generating-curve components and height
/// profiles; missing derivatives fall back to central differences.
#[derive(Clone)]
pub struct ScalarCurve {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    d1: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    d2: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl std::fmt::Debug for ScalarCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarCurve")
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .finish()
    }
}

impl ScalarCurve {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarCurve {
            f: Arc::new(f),
            d1: None,
            d2: None,
        }
    }

    pub fn constant(value: f64) -> Self {
        ScalarCurve::new(move |_| value)
            .with_derivative(|_| 0.0)
            .with_second(|_| 0.0)
    }

    pub fn with_derivative(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    pub fn with_second(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64, policy: &StepPolicy) -> f64 {
        match &self.d1 {
            Some(d) => d(x),
            None => {
                let h = policy.first_step(x);
                ((self.f)(x + h) - (self.f)(x - h)) / (2.0 * h)
            }
        }
    }

    pub fn second(&self, x: f64, policy: &StepPolicy) -> f64 {
        match &self.d2 {
            Some(d) => d(x),
            None => {
                let h = policy.second_step(x);
                ((self.f)(x + h) - 2.0 * (self.f)(x) + (self.f)(x - h)) / (h * h)
            }
        }
    }
}

/// Gaussian curvature of a warped-product metric `ds^2 + U(s)^2 dt^2`:
/// `K = -U''(s) / U(s)`.
pub fn warped_metric_curvature(u_of_s: &ScalarCurve, s: f64, policy: &StepPolicy) -> Result<f64> {
    let u = u_of_s.value(s);
    if !(u > 0.0) {
        return Err(Error::Domain(format!(
            "warping function must be positive, got U({s}) = {u}"
        )));
    }
    Ok(-u_of_s.second(s, policy) / u)
}
