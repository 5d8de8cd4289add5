//! Mesh, profile and report serialization.
//!
//! All numeric output is formatted with nine significant digits through
//! [`fmt9`], so identical inputs serialize to identical bytes.  Meshes use a
//! plain-text polygon format (`v x y z` vertex lines, `f i j k l` quad lines
//! with 1-based indices) plus a sidecar CSV of per-vertex attributes;
//! profiles are CSV tables with the header `U,R,Lambda,Theta,abs_n3,K`;
//! verification reports serialize to single `key=value` lines.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::family::TranslatorSurface;
use crate::surface::{JetMode, StepPolicy, Vec3};
use crate::verify::VerificationReport;

/// Formats with nine significant digits, like C's `%.9g`: plain decimal for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn fmt9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.8e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent digits");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 9);
    let body = if (-4..9).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let fraction = digits[split..].trim_end_matches('0');
            if fraction.is_empty() {
                digits[..split].to_string()
            } else {
                format!("{}.{}", &digits[..split], fraction)
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("0.{zeros}{}", digits.trim_end_matches('0'))
        }
    } else {
        let rest = digits[1..].trim_end_matches('0');
        if rest.is_empty() {
            format!("{}e{exp}", &digits[..1])
        } else {
            format!("{}.{rest}e{exp}", &digits[..1])
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Per-vertex attributes carried next to a mesh.
#[derive(Clone, Copy, Debug)]
pub struct VertexAttributes {
    pub u: f64,
    pub v: f64,
    pub n3: f64,
    pub k: f64,
}

/// Quad mesh sampled from a surface patch.
#[derive(Clone, Debug)]
pub struct MeshOutput {
    pub vertices: Vec<Vec3>,
    /// Quad corner indices, 0-based, counterclockwise in parameter space.
    pub faces: Vec<[usize; 4]>,
    pub attributes: Vec<VertexAttributes>,
}

/// Samples an `n_u x n_v` vertex grid over the full patch domain.
///
/// Produces `(n_u - 1) * (n_v - 1)` quads; attribute samples that hit
/// singular points are recorded as NaN rather than dropped, keeping the
/// attribute table aligned with the vertex list.
pub fn tessellate(surface: &TranslatorSurface, n_u: usize, n_v: usize) -> Result<MeshOutput> {
    if n_u < 2 || n_v < 2 {
        return Err(Error::InvalidArgument(format!(
            "mesh grid must be at least 2 x 2, got {n_u} x {n_v}"
        )));
    }
    let patch = surface.patch();
    let d = patch.domain();
    let policy = StepPolicy::default();
    let mut vertices = Vec::with_capacity(n_u * n_v);
    let mut attributes = Vec::with_capacity(n_u * n_v);
    for i in 0..n_u {
        let u = d.u_min + d.u_width() * i as f64 / (n_u - 1) as f64;
        for j in 0..n_v {
            let v = d.v_min + d.v_width() * j as f64 / (n_v - 1) as f64;
            vertices.push(patch.position_unchecked(u, v));
            let (n3, k) = match patch.fundamental_forms(u, v, JetMode::Auto, &policy) {
                Ok(ff) => (ff.n3, ff.k),
                Err(_) => (f64::NAN, f64::NAN),
            };
            attributes.push(VertexAttributes { u, v, n3, k });
        }
    }
    let mut faces = Vec::with_capacity((n_u - 1) * (n_v - 1));
    for i in 0..n_u - 1 {
        for j in 0..n_v - 1 {
            let a = i * n_v + j;
            let b = (i + 1) * n_v + j;
            faces.push([a, b, b + 1, a + 1]);
        }
    }
    Ok(MeshOutput {
        vertices,
        faces,
        attributes,
    })
}

/// Plain-text polygon serialization: `v` lines then `f` lines (1-based).
pub fn mesh_to_text(mesh: &MeshOutput) -> String {
    let mut out = String::new();
    for p in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", fmt9(p.x), fmt9(p.y), fmt9(p.z)));
    }
    for f in &mesh.faces {
        out.push_str(&format!(
            "f {} {} {} {}\n",
            f[0] + 1,
            f[1] + 1,
            f[2] + 1,
            f[3] + 1
        ));
    }
    out
}

/// Sidecar attribute table, one row per vertex.
pub fn attributes_to_csv(mesh: &MeshOutput) -> String {
    let mut out = String::from("index,U,t,n3,K\n");
    for (i, a) in mesh.attributes.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{},{}\n",
            fmt9(a.u),
            fmt9(a.v),
            fmt9(a.n3),
            fmt9(a.k)
        ));
    }
    out
}

/// Path of the attribute sidecar written next to a mesh file.
pub fn sidecar_path(mesh_path: &Path) -> PathBuf {
    mesh_path.with_extension("attrs.csv")
}

/// Writes the mesh text and its attribute sidecar.
pub fn write_mesh(mesh: &MeshOutput, path: &Path) -> Result<()> {
    std::fs::write(path, mesh_to_text(mesh))?;
    std::fs::write(sidecar_path(path), attributes_to_csv(mesh))?;
    Ok(())
}

/// One row of a member profile table.
#[derive(Clone, Copy, Debug)]
pub struct ProfileRow {
    pub u: f64,
    pub r: f64,
    pub lambda: f64,
    pub theta: f64,
    pub abs_n3: f64,
    pub k: f64,
}

/// Profile rows at explicit `U` values.
pub fn profile_rows_at(surface: &TranslatorSurface, us: &[f64]) -> Result<Vec<ProfileRow>> {
    let datum = surface
        .datum()
        .ok_or_else(|| Error::InvalidArgument("profiles need a helicoidal member".into()))?;
    let policy = StepPolicy::default();
    let patch = surface.patch();
    us.iter()
        .map(|&u| {
            let ff = patch.fundamental_forms(u, 1.0, JetMode::Auto, &policy)?;
            Ok(ProfileRow {
                u,
                r: datum.radius(u),
                lambda: datum.height(u),
                theta: datum.twist(u),
                abs_n3: ff.n3.abs(),
                k: ff.k,
            })
        })
        .collect()
}

/// `n` uniform profile rows over the member's `U` domain, endpoints included.
pub fn profile_rows(surface: &TranslatorSurface, n: usize) -> Result<Vec<ProfileRow>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "need at least two profile rows".into(),
        ));
    }
    let (lo, hi) = surface.u_domain();
    let us: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    profile_rows_at(surface, &us)
}

pub fn profile_to_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("U,R,Lambda,Theta,abs_n3,K\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt9(r.u),
            fmt9(r.r),
            fmt9(r.lambda),
            fmt9(r.theta),
            fmt9(r.abs_n3),
            fmt9(r.k)
        ));
    }
    out
}

pub fn parse_profile_csv(text: &str) -> Result<Vec<ProfileRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("U,R,Lambda,Theta,abs_n3,K") => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "bad profile header: {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|e| {
                        Error::InvalidArgument(format!("bad profile field {s:?}: {e}"))
                    })
                })
                .collect::<Result<_>>()?;
            if fields.len() != 6 {
                return Err(Error::InvalidArgument(format!(
                    "profile row needs 6 fields, got {}",
                    fields.len()
                )));
            }
            Ok(ProfileRow {
                u: fields[0],
                r: fields[1],
                lambda: fields[2],
                theta: fields[3],
                abs_n3: fields[4],
                k: fields[5],
            })
        })
        .collect()
}

/// Single-line report serialization:
/// `check=<name> max_residual=<val> tol=<val> passed=<bool> argmax=<u,v>`,
/// with ` skipped=true` appended for not-applicable checks.
pub fn report_line(report: &VerificationReport) -> String {
    let mut line = format!(
        "check={} max_residual={} tol={} passed={} argmax={},{}",
        report.check,
        fmt9(report.max_residual),
        fmt9(report.tolerance),
        report.passed,
        fmt9(report.argmax.0),
        fmt9(report.argmax.1),
    );
    if report.skipped {
        line.push_str(" skipped=true");
    }
    line
}
