//! Canonical patches and independent oracles shared by unit tests.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::surface::{Jet, JetMode, ParametricPatch, Rect, StepPolicy, Vec3};

/// Flat plane `(u, v, 0)` on `[-1, 1]^2`.
pub fn plane_patch() -> ParametricPatch {
    ParametricPatch::with_jet(
        "plane",
        Rect::new(-1.0, 1.0, -1.0, 1.0),
        Arc::new(|u, v| Vec3::new(u, v, 0.0)),
        Arc::new(|_, _| Jet {
            xu: Vec3::new(1.0, 0.0, 0.0),
            xv: Vec3::new(0.0, 1.0, 0.0),
            xuu: Vec3::zeros(),
            xuv: Vec3::zeros(),
            xvv: Vec3::zeros(),
        }),
    )
}

/// Circular cylinder `(r cos v, r sin v, u)`, `u` in `[0, 1]`, `v` in `[0, 2pi]`.
pub fn cylinder_patch(radius: f64) -> ParametricPatch {
    let r = radius;
    ParametricPatch::with_jet(
        "cylinder",
        Rect::new(0.0, 1.0, 0.0, 2.0 * PI),
        Arc::new(move |u, v| Vec3::new(r * v.cos(), r * v.sin(), u)),
        Arc::new(move |_, v| Jet {
            xu: Vec3::new(0.0, 0.0, 1.0),
            xv: Vec3::new(-r * v.sin(), r * v.cos(), 0.0),
            xuu: Vec3::zeros(),
            xuv: Vec3::zeros(),
            xvv: Vec3::new(-r * v.cos(), -r * v.sin(), 0.0),
        }),
    )
}

/// Graph `z = (u^2 + v^2) / 2` on `[-1, 1]^2`.
pub fn paraboloid_graph_patch() -> ParametricPatch {
    ParametricPatch::with_jet(
        "paraboloid-graph",
        Rect::new(-1.0, 1.0, -1.0, 1.0),
        Arc::new(|u, v| Vec3::new(u, v, 0.5 * (u * u + v * v))),
        Arc::new(|u, v| Jet {
            xu: Vec3::new(1.0, 0.0, u),
            xv: Vec3::new(0.0, 1.0, v),
            xuu: Vec3::new(0.0, 0.0, 1.0),
            xuv: Vec3::zeros(),
            xvv: Vec3::new(0.0, 0.0, 1.0),
        }),
    )
}

/// Round sphere `(r cos u cos v, r cos u sin v, r sin u)` away from the poles.
pub fn sphere_patch(radius: f64) -> ParametricPatch {
    let r = radius;
    ParametricPatch::with_jet(
        "sphere",
        Rect::new(-1.2, 1.2, 0.0, 2.0 * PI),
        Arc::new(move |u: f64, v: f64| {
            Vec3::new(r * u.cos() * v.cos(), r * u.cos() * v.sin(), r * u.sin())
        }),
        Arc::new(move |u: f64, v: f64| {
            let (su, cu) = u.sin_cos();
            let (sv, cv) = v.sin_cos();
            Jet {
                xu: Vec3::new(-r * su * cv, -r * su * sv, r * cu),
                xv: Vec3::new(-r * cu * sv, r * cu * cv, 0.0),
                xuu: Vec3::new(-r * cu * cv, -r * cu * sv, -r * su),
                xuv: Vec3::new(r * su * sv, -r * su * cv, 0.0),
                xvv: Vec3::new(-r * cu * cv, -r * cu * sv, 0.0),
            }
        }),
    )
}

/// Intrinsic Gaussian curvature by the Brioschi formula, with the metric
/// coefficients and their derivatives taken by central differences.  An
/// independent cross-check for the second-fundamental-form route.
pub fn brioschi_curvature(patch: &ParametricPatch, u: f64, v: f64, policy: &StepPolicy) -> f64 {
    let m = |uu: f64, vv: f64| {
        patch
            .first_fundamental_form(uu, vv, JetMode::Auto, policy)
            .unwrap()
    };
    let h = policy.second_step(u.abs().max(v.abs()));

    let at = m(u, v);
    let (e, f, g) = (at.e, at.f, at.g);

    let mu_p = m(u + h, v);
    let mu_m = m(u - h, v);
    let mv_p = m(u, v + h);
    let mv_m = m(u, v - h);

    let e_u = (mu_p.e - mu_m.e) / (2.0 * h);
    let e_v = (mv_p.e - mv_m.e) / (2.0 * h);
    let g_u = (mu_p.g - mu_m.g) / (2.0 * h);
    let g_v = (mv_p.g - mv_m.g) / (2.0 * h);
    let f_u = (mu_p.f - mu_m.f) / (2.0 * h);
    let f_v = (mv_p.f - mv_m.f) / (2.0 * h);

    let e_vv = (mv_p.e - 2.0 * e + mv_m.e) / (h * h);
    let g_uu = (mu_p.g - 2.0 * g + mu_m.g) / (h * h);
    let mpp = m(u + h, v + h);
    let mpm = m(u + h, v - h);
    let mmp = m(u - h, v + h);
    let mmm = m(u - h, v - h);
    let f_uv = (mpp.f - mpm.f - mmp.f + mmm.f) / (4.0 * h * h);

    let m1 = nalgebra::Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu,
        0.5 * e_u,
        f_u - 0.5 * e_v,
        f_v - 0.5 * g_u,
        e,
        f,
        0.5 * g_v,
        f,
        g,
    );
    let m2 = nalgebra::Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, g);

    let det = e * g - f * f;
    (m1.determinant() - m2.determinant()) / (det * det)
}
