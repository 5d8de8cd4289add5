//! `heliflow` — build, deform, verify and export translator surfaces.
//!
//! Exit statuses: 0 all checks passed, 1 verification failure, 2 empty
//! parameter domain, 3 configuration error.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use heliflow_core::bour::{
    build_bour_chart, family_patch, recover_datum, HelicoidalSeed, SignBranch,
};
use heliflow_core::family::{
    build_helicoidal, cylinder_translator, deformation_path, FamilyParams, TranslatorSurface,
    DEFAULT_GRID_N,
};
use heliflow_core::io::{
    mesh_to_text, profile_rows, profile_to_csv, report_line, tessellate, write_mesh,
};
use heliflow_core::verify::{
    check_angle, check_family_angle, check_family_isometry, check_isometry, check_metric,
    full_suite, tolerances, GridSpec, VerificationReport,
};
use heliflow_core::Error as CoreError;

mod config;
use config::{resolve, Format, JobConfig};

#[derive(Parser)]
#[command(
    name = "heliflow",
    version,
    about = "Helicoidal translators of the quarter-power Gauss curvature flow"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one surface, emit its mesh and run the identity suite
    Generate(JobArgs),
    /// Meshes along the isometric deformation path with pairwise isometry reports
    Deform(JobArgs),
    /// Run the identity suite for one surface
    Verify(JobArgs),
    /// Emit a mesh without verification
    Export(JobArgs),
    /// Tabulate the generating data as CSV rows (U, R, Lambda, Theta, |n3|, K)
    Profile(JobArgs),
}

#[derive(Args, Debug, Default)]
struct JobArgs {
    /// First-integral constant c
    #[arg(long)]
    c: Option<f64>,
    /// Pitch h (deform: the target pitch)
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Seed pitch of the deformation path
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Scale of the Bour deformation family; verify adds the family checks
    /// when it differs from 1
    #[arg(long)]
    lambda: Option<f64>,
    /// Verify the metric and angle charts against this constant instead of
    /// the member's own c (negative-control probe)
    #[arg(long = "probe-c", allow_hyphen_values = true)]
    probe_c: Option<f64>,
    /// Build the cylinder branch of this radius instead of a member
    #[arg(long)]
    radius: Option<f64>,
    /// Upper bound of the U coordinate
    #[arg(long = "u-cap")]
    u_cap: Option<f64>,
    /// Sample grid NxM (mesh vertices / verification samples / profile rows)
    #[arg(long)]
    grid: Option<String>,
    /// Number of pitch increments along a deformation path
    #[arg(long)]
    steps: Option<usize>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: mesh | table | report
    #[arg(long)]
    format: Option<String>,
    /// Structured config file (TOML key = value); flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

enum CliError {
    Config(String),
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(3),
            CliError::Core(
                CoreError::EmptyDomain(_)
                | CoreError::NoCommonWindow(_)
                | CoreError::DomainViolation { .. },
            ) => ExitCode::from(2),
            CliError::Core(_) => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    let result = match &cli.command {
        Command::Generate(args) => job(args).and_then(|cfg| generate(&cfg, true)),
        Command::Export(args) => job(args).and_then(|cfg| generate(&cfg, false)),
        Command::Verify(args) => job(args).and_then(|cfg| verify(&cfg)),
        Command::Deform(args) => job(args).and_then(|cfg| deform(&cfg)),
        Command::Profile(args) => job(args).and_then(|cfg| profile(&cfg)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("heliflow: {e}");
            e.exit_code()
        }
    }
}

fn job(args: &JobArgs) -> Result<JobConfig, CliError> {
    resolve(args).map_err(CliError::Config)
}

fn build_surface(cfg: &JobConfig) -> Result<TranslatorSurface, CliError> {
    match cfg.radius {
        Some(r) => Ok(cylinder_translator(r)?),
        None => Ok(build_helicoidal(
            FamilyParams::new(cfg.c, cfg.h)?,
            cfg.u_cap,
            DEFAULT_GRID_N,
        )?),
    }
}

fn describe(cfg: &JobConfig) -> String {
    match cfg.radius {
        Some(r) => format!("cylinder radius={r}"),
        None => format!("member c={} h={}", cfg.c, cfg.h),
    }
}

fn expect_format(cfg: &JobConfig, want: Format) -> Result<(), CliError> {
    match cfg.format {
        None => Ok(()),
        Some(f) if f == want => Ok(()),
        Some(f) => Err(CliError::Config(format!(
            "this command produces {want:?} output, not {f:?}"
        ))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Core(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn suite_status(reports: &[VerificationReport]) -> ExitCode {
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn generate(cfg: &JobConfig, verify_after: bool) -> Result<ExitCode, CliError> {
    expect_format(cfg, Format::Mesh)?;
    eprintln!("heliflow: building {}", describe(cfg));
    let surface = build_surface(cfg)?;
    let mesh = tessellate(&surface, cfg.grid.0, cfg.grid.1)?;
    match &cfg.out {
        Some(path) => write_mesh(&mesh, path)?,
        None => print!("{}", mesh_to_text(&mesh)),
    }
    if !verify_after {
        return Ok(ExitCode::SUCCESS);
    }
    let reports = full_suite(&surface, &GridSpec::default())?;
    for r in &reports {
        println!("{}", report_line(r));
    }
    Ok(suite_status(&reports))
}

fn verify(cfg: &JobConfig) -> Result<ExitCode, CliError> {
    expect_format(cfg, Format::Report)?;
    eprintln!("heliflow: verifying {}", describe(cfg));
    let surface = build_surface(cfg)?;
    let grid = GridSpec::new(cfg.grid.0.max(4), cfg.grid.1.max(4), 0.05);
    let mut reports = full_suite(&surface, &grid)?;
    if let Some(probe) = cfg.probe_c {
        let mut m = check_metric(&surface, probe, &grid, tolerances::METRIC)?;
        m.check = "metric_probe".into();
        reports.push(m);
        let mut a = check_angle(&surface, probe, &grid, tolerances::ANGLE)?;
        a.check = "angle_probe".into();
        reports.push(a);
    }
    if cfg.lambda != 1.0 && !surface.is_cylinder() {
        // scaled member of the isometric family, in Bour coordinates
        let seed = HelicoidalSeed::from_member(&surface)?;
        let chart = build_bour_chart(&seed, DEFAULT_GRID_N)?;
        let datum = recover_datum(&chart, cfg.lambda, cfg.h, SignBranch::Plus)?;
        let patch = family_patch(&datum);
        reports.push(check_family_isometry(
            &chart,
            &patch,
            &grid,
            tolerances::FAMILY_ISOMETRY,
        )?);
        reports.push(check_family_angle(
            &chart,
            cfg.lambda,
            &patch,
            &grid,
            tolerances::FAMILY_ANGLE,
        )?);
    }
    let text: String = reports
        .iter()
        .map(|r| format!("{}\n", report_line(r)))
        .collect();
    emit(&text, cfg.out.as_deref())?;
    if cfg.out.is_some() {
        print!("{text}");
    }
    Ok(suite_status(&reports))
}

fn deform(cfg: &JobConfig) -> Result<ExitCode, CliError> {
    expect_format(cfg, Format::Mesh)?;
    eprintln!(
        "heliflow: deformation path c={} from mu={} to h={} in {} steps",
        cfg.c, cfg.mu, cfg.h, cfg.steps
    );
    let path = deformation_path(cfg.mu, cfg.c, cfg.h, cfg.steps, cfg.u_cap, DEFAULT_GRID_N)?;
    if let Some(out) = &cfg.out {
        for (i, member) in path.iter().enumerate() {
            let mesh = tessellate(member, cfg.grid.0, cfg.grid.1)?;
            write_mesh(&mesh, &numbered_path(out, i))?;
        }
    }
    let grid = GridSpec::default();
    let mut reports = Vec::new();
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let mut r = check_isometry(&path[i], &path[j], &grid, tolerances::ISOMETRY)?;
            r.check = format!(
                "isometry[h={},h={}]",
                path[i].params().expect("member").h,
                path[j].params().expect("member").h
            );
            reports.push(r);
        }
    }
    for r in &reports {
        println!("{}", report_line(r));
    }
    Ok(suite_status(&reports))
}

fn numbered_path(base: &Path, index: usize) -> PathBuf {
    let stem = base.file_stem().unwrap_or_default().to_string_lossy();
    let ext = base.extension().map(|e| e.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}_{index}.{ext}"),
        None => format!("{stem}_{index}"),
    };
    base.with_file_name(name)
}

fn profile(cfg: &JobConfig) -> Result<ExitCode, CliError> {
    expect_format(cfg, Format::Table)?;
    eprintln!("heliflow: profiling {}", describe(cfg));
    let surface = build_surface(cfg)?;
    let rows = profile_rows(&surface, cfg.grid.0.max(2))?;
    emit(&profile_to_csv(&rows), cfg.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
