//! Python bindings: surface construction, pointwise geometry, the Bour
//! deformation family and the verification suite.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use heliflow_core::bour;
use heliflow_core::family;
use heliflow_core::io;
use heliflow_core::surface::{JetMode, ScalarCurve, StepPolicy, Vec3};
use heliflow_core::verify;

fn err(e: heliflow_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// (U, R, Lambda, Theta, |n3|, K) profile row.
type ProfileTuple = (f64, f64, f64, f64, f64, f64);

const POLICY: StepPolicy = StepPolicy {
    first_min: 1e-5,
    first_rel: 1e-5,
    second_min: 1e-4,
    second_rel: 1e-4,
};

/// One translator surface: a cylinder or a helicoidal member.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Surface {
    inner: family::TranslatorSurface,
}

#[pymethods]
impl Surface {
    /// Position in space at geometric coordinates (u, t).
    fn position(&self, u: f64, t: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.inner.patch().evaluate(u, t).map_err(err)?;
        Ok((p.x, p.y, p.z))
    }

    /// First-fundamental-form coefficients (E, F, G).
    fn metric(&self, u: f64, t: f64) -> PyResult<(f64, f64, f64)> {
        let m = self
            .inner
            .patch()
            .first_fundamental_form(u, t, JetMode::Auto, &POLICY)
            .map_err(err)?;
        Ok((m.e, m.f, m.g))
    }

    /// Vertical component of the unit normal.
    fn angle(&self, u: f64, t: f64) -> PyResult<f64> {
        let (_, n3) = self
            .inner
            .patch()
            .unit_normal_and_angle(u, t, JetMode::Auto, &POLICY)
            .map_err(err)?;
        Ok(n3)
    }

    /// Gaussian curvature.
    fn curvature(&self, u: f64, t: f64) -> PyResult<f64> {
        self.inner
            .patch()
            .gauss_curvature(u, t, JetMode::Auto, &POLICY)
            .map_err(err)
    }

    fn u_domain(&self) -> (f64, f64) {
        self.inner.u_domain()
    }

    fn is_cylinder(&self) -> bool {
        self.inner.is_cylinder()
    }

    #[getter]
    fn c(&self) -> Option<f64> {
        self.inner.params().map(|p| p.c)
    }

    #[getter]
    fn h(&self) -> Option<f64> {
        self.inner.params().map(|p| p.h)
    }

    #[getter]
    fn radius(&self) -> Option<f64> {
        self.inner.radius()
    }

    /// Rows (U, R, Lambda, Theta, |n3|, K) over the U domain.
    fn profile(&self, n: usize) -> PyResult<Vec<ProfileTuple>> {
        let rows = io::profile_rows(&self.inner, n).map_err(err)?;
        Ok(rows
            .iter()
            .map(|r| (r.u, r.r, r.lambda, r.theta, r.abs_n3, r.k))
            .collect())
    }

    fn __repr__(&self) -> String {
        match self.inner.params() {
            Some(p) => format!("Surface(c={}, h={})", p.c, p.h),
            None => format!("Surface(cylinder, radius={})", self.inner.radius().unwrap()),
        }
    }
}

/// Outcome of one verification check.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Report {
    #[pyo3(get)]
    check: String,
    #[pyo3(get)]
    max_residual: f64,
    #[pyo3(get)]
    tolerance: f64,
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    skipped: bool,
    #[pyo3(get)]
    argmax: (f64, f64),
    line: String,
}

#[pymethods]
impl Report {
    /// The stable single-line serialization.
    fn line(&self) -> String {
        self.line.clone()
    }

    fn __repr__(&self) -> String {
        self.line.clone()
    }
}

impl From<verify::VerificationReport> for Report {
    fn from(r: verify::VerificationReport) -> Self {
        let line = io::report_line(&r);
        Report {
            check: r.check,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            passed: r.passed,
            skipped: r.skipped,
            argmax: r.argmax,
            line,
        }
    }
}

/// Bour coordinates of a member, with the induced deformation family.
#[pyclass]
struct Chart {
    inner: bour::BourChart,
}

#[pymethods]
impl Chart {
    fn s_domain(&self) -> (f64, f64) {
        self.inner.s_domain()
    }

    /// Bour function U at arc coordinate s.
    fn bour_u(&self, s: f64) -> f64 {
        self.inner.bour_u(s)
    }

    fn du_ds(&self, s: f64) -> f64 {
        self.inner.du_ds(s)
    }

    /// Squared angle function lambda^2 (dU/ds)^2 of the scaled member.
    fn angle_sq(&self, lam: f64, s: f64) -> f64 {
        bour::family_angle_sq(&self.inner.bour_curve(), lam, s, &POLICY)
    }

    /// Recover the (lambda, h) member of the isometric family.
    #[pyo3(signature = (lam, h, positive_branch = true))]
    fn deform(&self, lam: f64, h: f64, positive_branch: bool) -> PyResult<Deformed> {
        let sign = if positive_branch {
            bour::SignBranch::Plus
        } else {
            bour::SignBranch::Minus
        };
        let datum = bour::recover_datum(&self.inner, lam, h, sign).map_err(err)?;
        let patch = bour::family_patch(&datum);
        Ok(Deformed { datum, patch })
    }
}

/// A member of the two-parameter isometric family over (s, t).
#[pyclass]
struct Deformed {
    datum: bour::DeformedDatum,
    patch: heliflow_core::surface::ParametricPatch,
}

#[pymethods]
impl Deformed {
    fn s_domain(&self) -> (f64, f64) {
        self.datum.s_domain()
    }

    fn position(&self, s: f64, t: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.patch.evaluate(s, t).map_err(err)?;
        Ok((p.x, p.y, p.z))
    }

    /// Numeric first fundamental form; equals (1, 0, U^2) of the seed chart.
    fn metric(&self, s: f64, t: f64) -> PyResult<(f64, f64, f64)> {
        let m = self
            .patch
            .first_fundamental_form(s, t, JetMode::Numeric, &POLICY)
            .map_err(err)?;
        Ok((m.e, m.f, m.g))
    }

    fn radius(&self, s: f64) -> f64 {
        self.datum.radius(s)
    }

    fn height(&self, s: f64) -> f64 {
        self.datum.height(s)
    }

    fn twist(&self, s: f64) -> f64 {
        self.datum.twist(s)
    }
}

/// Helicoidal member with first integral `c` and pitch `h`.
#[pyfunction]
#[pyo3(signature = (c, h, u_cap = 5.0, grid_n = 512))]
fn helicoidal(c: f64, h: f64, u_cap: f64, grid_n: usize) -> PyResult<Surface> {
    let params = family::FamilyParams::new(c, h).map_err(err)?;
    Ok(Surface {
        inner: family::build_helicoidal(params, u_cap, grid_n).map_err(err)?,
    })
}

/// Rotational member with the closed-form height profile.
#[pyfunction]
#[pyo3(signature = (c, u_cap = 5.0))]
fn rotational(c: f64, u_cap: f64) -> PyResult<Surface> {
    Ok(Surface {
        inner: family::rotational_surface(c, u_cap).map_err(err)?,
    })
}

/// The cylinder branch.
#[pyfunction]
fn cylinder(radius: f64) -> PyResult<Surface> {
    Ok(Surface {
        inner: family::cylinder_translator(radius).map_err(err)?,
    })
}

/// Closed-form rotational height Lambda_c(U).
#[pyfunction]
fn rotational_profile(c: f64, u: f64) -> PyResult<f64> {
    family::rotational_profile(c, u).map_err(err)
}

/// Working U interval of the (c, h) member, or None when empty.
#[pyfunction]
#[pyo3(signature = (c, h, u_cap = 5.0))]
fn domain_bounds(c: f64, h: f64, u_cap: f64) -> PyResult<Option<(f64, f64)>> {
    let params = family::FamilyParams::new(c, h).map_err(err)?;
    Ok(family::domain_bounds(&params, u_cap).map(|b| (b.u_min, b.u_max)))
}

/// Screw motion: rotate (x, y) by `angle` and lift z by `pitch * angle`.
#[pyfunction]
fn screw_motion(p: (f64, f64, f64), angle: f64, pitch: f64) -> (f64, f64, f64) {
    let q = family::screw_motion(Vec3::new(p.0, p.1, p.2), angle, pitch);
    (q.x, q.y, q.z)
}

/// Members of fixed `c` with pitch interpolated from `mu` to `h_target`.
#[pyfunction]
#[pyo3(signature = (mu, c, h_target, steps, u_cap = 5.0))]
fn deformation_path(
    mu: f64,
    c: f64,
    h_target: f64,
    steps: usize,
    u_cap: f64,
) -> PyResult<Vec<Surface>> {
    let members = family::deformation_path(mu, c, h_target, steps, u_cap, 512).map_err(err)?;
    Ok(members.into_iter().map(|inner| Surface { inner }).collect())
}

/// Run the identity suite and return one report per check.
#[pyfunction]
#[pyo3(signature = (surface, n_u = 40, n_v = 40))]
fn verify_surface(surface: &Surface, n_u: usize, n_v: usize) -> PyResult<Vec<Report>> {
    let grid = verify::GridSpec::new(n_u, n_v, 0.05);
    let reports = verify::full_suite(&surface.inner, &grid).map_err(err)?;
    Ok(reports.into_iter().map(Report::from).collect())
}

/// Residual of the translator ODE U''/U + (U')^4 at the arc position of `u`.
#[pyfunction]
#[pyo3(signature = (c, u, u_cap = 5.0))]
fn ode_residual(c: f64, u: f64, u_cap: f64) -> PyResult<f64> {
    let params = family::FamilyParams::new(c, 0.0).map_err(err)?;
    let bounds = family::domain_bounds(&params, u_cap)
        .ok_or_else(|| PyValueError::new_err("empty chart domain"))?;
    let chart = family::ArcChart::new(c, bounds.u_min.max(0.2), u_cap, 512).map_err(err)?;
    let curve: ScalarCurve = chart.bour_curve();
    Ok(family::ode_residual(&curve, chart.s_of_u(u), &POLICY))
}

/// Bour chart of a helicoidal member.
#[pyfunction]
fn chart_of(surface: &Surface) -> PyResult<Chart> {
    let seed = bour::HelicoidalSeed::from_member(&surface.inner).map_err(err)?;
    Ok(Chart {
        inner: bour::build_bour_chart(&seed, 512).map_err(err)?,
    })
}

/// Write the mesh and its attribute sidecar to `path`.
#[pyfunction]
fn export_mesh(surface: &Surface, n_u: usize, n_v: usize, path: &str) -> PyResult<()> {
    let mesh = io::tessellate(&surface.inner, n_u, n_v).map_err(err)?;
    io::write_mesh(&mesh, std::path::Path::new(path)).map_err(err)
}

/// Profile table as CSV text with header U,R,Lambda,Theta,abs_n3,K.
#[pyfunction]
fn profile_csv(surface: &Surface, n: usize) -> PyResult<String> {
    let rows = io::profile_rows(&surface.inner, n).map_err(err)?;
    Ok(io::profile_to_csv(&rows))
}

#[pymodule]
fn heliflow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_class::<Report>()?;
    m.add_class::<Chart>()?;
    m.add_class::<Deformed>()?;
    m.add_function(wrap_pyfunction!(helicoidal, m)?)?;
    m.add_function(wrap_pyfunction!(rotational, m)?)?;
    m.add_function(wrap_pyfunction!(cylinder, m)?)?;
    m.add_function(wrap_pyfunction!(rotational_profile, m)?)?;
    m.add_function(wrap_pyfunction!(domain_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(screw_motion, m)?)?;
    m.add_function(wrap_pyfunction!(deformation_path, m)?)?;
    m.add_function(wrap_pyfunction!(verify_surface, m)?)?;
    m.add_function(wrap_pyfunction!(ode_residual, m)?)?;
    m.add_function(wrap_pyfunction!(chart_of, m)?)?;
    m.add_function(wrap_pyfunction!(export_mesh, m)?)?;
    m.add_function(wrap_pyfunction!(profile_csv, m)?)?;
    Ok(())
}
