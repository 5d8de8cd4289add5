//! Job configuration: defaults, optional config file, flag overrides.

use std::path::PathBuf;

use heliflow_core::family::DEFAULT_U_CAP;
use serde::Deserialize;

use crate::JobArgs;

/// Values accepted in a `--config` file.  Flags override every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub c: Option<f64>,
    pub h: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub probe_c: Option<f64>,
    pub radius: Option<f64>,
    pub u_cap: Option<f64>,
    pub grid: Option<String>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Mesh,
    Table,
    Report,
}

impl Format {
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "mesh" => Ok(Format::Mesh),
            "table" => Ok(Format::Table),
            "report" => Ok(Format::Report),
            other => Err(format!(
                "unknown format {other:?}; expected mesh, table or report"
            )),
        }
    }
}

/// Fully resolved job parameters.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub c: f64,
    pub h: f64,
    pub mu: f64,
    pub lambda: f64,
    pub probe_c: Option<f64>,
    pub radius: Option<f64>,
    pub u_cap: f64,
    pub grid: (usize, usize),
    pub steps: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn resolve(args: &JobArgs) -> Result<JobConfig, String> {
    let file = match &args.config {
        None => FileConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
    };

    let grid_text = args.grid.clone().or(file.grid);
    let grid = match grid_text {
        None => (40, 40),
        Some(g) => parse_grid(&g)?,
    };
    let format = match args.format.clone().or(file.format) {
        None => None,
        Some(f) => Some(Format::parse(&f)?),
    };

    let config = JobConfig {
        c: args.c.or(file.c).unwrap_or(1.0),
        h: args.h.or(file.h).unwrap_or(0.0),
        mu: args.mu.or(file.mu).unwrap_or(1.0),
        lambda: args.lambda.or(file.lambda).unwrap_or(1.0),
        probe_c: args.probe_c.or(file.probe_c),
        radius: args.radius.or(file.radius),
        u_cap: args.u_cap.or(file.u_cap).unwrap_or(DEFAULT_U_CAP),
        grid,
        steps: args.steps.or(file.steps).unwrap_or(4),
        out: args.out.clone().or(file.out),
        format,
    };

    for (name, value) in [
        ("c", config.c),
        ("h", config.h),
        ("mu", config.mu),
        ("lambda", config.lambda),
        ("u-cap", config.u_cap),
    ] {
        if !value.is_finite() {
            return Err(format!("{name} must be finite, got {value}"));
        }
    }
    if let Some(r) = config.radius {
        if !(r > 0.0) {
            return Err(format!("radius must be positive, got {r}"));
        }
    }
    if config.u_cap <= 0.0 {
        return Err(format!("u-cap must be positive, got {}", config.u_cap));
    }
    if config.steps == 0 {
        return Err("steps must be at least 1".into());
    }
    Ok(config)
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like NxM, got {text:?}"))?;
    let n: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad grid count {a:?}"))?;
    let m: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad grid count {b:?}"))?;
    if n < 2 || m < 2 {
        return Err(format!("grid must be at least 2x2, got {n}x{m}"));
    }
    Ok((n, m))
}
