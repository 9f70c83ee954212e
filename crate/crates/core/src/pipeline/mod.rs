//! The end-to-end run: points, triangulation, bounds, radii, cells,
//! validation, files.

mod config;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{DomainBox, RunConfig, Tolerances};

use crate::complex::{Complex, PlanarComplex, SpatialComplex};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::io::json::points_from_json;
use crate::io::{export_mesh, generate_points, render_svg, AnyMesh, MeshDocument, PointSet, SvgOptions, ValidationReport};
use crate::mesh::{build_volumes2, build_volumes3, validate_global, validate_perpendicularity, BuildOptions, Domain2, Domain3, DEFAULT_INFLATE};
use crate::solver::bounds::{all_bounds2, all_bounds3};
use crate::solver::{solve_radii, RadiusMode, Solution, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ValidationFailed,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 2,
            Status::NotConverged => 3,
        }
    }
}

/// Process exit code for an error that stopped the run.
pub fn error_exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::NonConvexCell { .. } | Error::NonPlanarFace { .. } | Error::OrphanVertex { .. } => 2,
        _ => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub objective: f64,
    pub max_residual: f64,
    pub residual_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub tol_perp: f64,
    pub perpendicularity_violations: usize,
    pub max_angle: f64,
    pub face_mismatches: usize,
    pub overlaps: usize,
    pub owners_outside: usize,
    pub foreign_points: usize,
    pub build_diagnostics: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTime {
    pub stage: String,
    pub ms: f64,
}

/// Written next to the artifacts as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dimension: usize,
    pub points: usize,
    pub seed: u64,
    pub mode: RadiusMode,
    pub status: Status,
    pub exit_code: i32,
    pub solver: SolverSummary,
    pub validation: ValidationSummary,
    pub artifacts: Vec<PathBuf>,
    pub timings: Vec<StageTime>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    pub document: MeshDocument,
    pub solution: Solution,
}

struct Clock {
    timings: Vec<StageTime>,
}

impl Clock {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f().map_err(|e| e.at(name));
        let ms = t.elapsed().as_secs_f64() * 1e3;
        log::info!("{name}: {ms:.1} ms");
        self.timings.push(StageTime { stage: name.to_string(), ms });
        out
    }
}

enum Built {
    Planar(PlanarComplex),
    Spatial(SpatialComplex),
}

impl Built {
    fn complex(&self) -> &dyn Complex {
        match self {
            Built::Planar(c) => c,
            Built::Spatial(c) => c,
        }
    }
}

fn load_points(cfg: &RunConfig) -> Result<PointSet> {
    match &cfg.points {
        Some(path) => {
            let p = points_from_json(&std::fs::read_to_string(path)?)?;
            if p.dim() != cfg.dim {
                return Err(Error::DimensionMismatch { expected: cfg.dim, found: p.dim() });
            }
            if p.len() < cfg.dim + 1 {
                return Err(Error::TooFewPoints { needed: cfg.dim + 1, got: p.len() });
            }
            Ok(p)
        }
        None => {
            let b = cfg.domain_box();
            generate_points(cfg.n, cfg.seed, &b.lo, &b.hi)
        }
    }
}

/// Run every stage and write the artifacts into `cfg.out`. Errors carry the
/// name of the stage that failed.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutcome> {
    let mut clock = Clock { timings: Vec::new() };
    clock.stage("config", || cfg.validate())?;
    let points = clock.stage(if cfg.points.is_some() { "load" } else { "generate" }, || load_points(cfg))?;
    let built = clock.stage("triangulate", || match &points {
        PointSet::Planar(p) => PlanarComplex::new(p.clone()).map(Built::Planar),
        PointSet::Spatial(p) => SpatialComplex::new(p.clone()).map(Built::Spatial),
    })?;
    let mode = cfg.effective_mode();
    if mode != RadiusMode::EqualRadii {
        clock.stage("bounds", || match &built {
            Built::Planar(c) => all_bounds2(&c.points, &c.nm).map(drop),
            Built::Spatial(c) => all_bounds3(&c.points, &c.nm).map(drop),
        })?;
    }
    let opts = SolveOptions {
        seed: cfg.seed,
        warm_start: None,
        reduction: cfg.reduction,
    };
    let solution = clock.stage("solve", || solve_radii(built.complex(), mode, &opts, &cfg.optimizer))?;
    let radii = solution.radii.r.clone();

    let mesh = clock.stage("build", || {
        let b = if cfg.points.is_some() { cfg.domain.clone() } else { Some(cfg.domain_box()) };
        match &built {
            Built::Planar(c) => {
                let domain = match b {
                    Some(b) => Domain2::rectangle(Point2::new(b.lo[0], b.lo[1]), Point2::new(b.hi[0], b.hi[1]))?,
                    None => Domain2::around(&c.points, DEFAULT_INFLATE)?,
                };
                let opts = BuildOptions { domain: Some(domain), strict: false };
                build_volumes2(c, &radii, &opts).map(AnyMesh::Planar)
            }
            Built::Spatial(c) => {
                let domain = match b {
                    Some(b) => Domain3::cuboid(Point3::new(b.lo[0], b.lo[1], b.lo[2]), Point3::new(b.hi[0], b.hi[1], b.hi[2]))?,
                    None => Domain3::around(&c.points, DEFAULT_INFLATE)?,
                };
                let opts = BuildOptions { domain: Some(domain), strict: false };
                build_volumes3(c, &radii, &opts).map(AnyMesh::Spatial)
            }
        }
    })?;

    let report = clock.stage("validate", || {
        let cv = mesh.as_cv();
        Ok(ValidationReport {
            perpendicularity: validate_perpendicularity(cv, cfg.tolerances.perp),
            global: validate_global(cv),
        })
    })?;

    let validation = ValidationSummary {
        tol_perp: cfg.tolerances.perp,
        perpendicularity_violations: report.perpendicularity.violations.len(),
        max_angle: report.perpendicularity.max_angle,
        face_mismatches: report.global.face_mismatches.len(),
        overlaps: report.global.overlaps.len(),
        owners_outside: report.global.owners_outside.len(),
        foreign_points: report.global.foreign_points.len(),
        build_diagnostics: mesh.diagnostics().len(),
    };
    let valid = report.passed() && mesh.diagnostics().is_empty();
    let converged = mode != RadiusMode::ExactIntersection || solution.max_residual < cfg.tolerances.residual;
    let status = if !converged {
        Status::NotConverged
    } else if !valid {
        Status::ValidationFailed
    } else {
        Status::Ok
    };

    let document = MeshDocument {
        mesh,
        radii,
        mode: Some(mode),
        validation: Some(report),
    };

    let artifacts = clock.stage("export", || {
        std::fs::create_dir_all(&cfg.out)?;
        let mut written = Vec::new();
        let mut formats = cfg.formats.clone();
        formats.dedup();
        for f in formats {
            let path = cfg.out.join(format!("mesh.{}", f.extension()));
            export_mesh(&document, f, &path)?;
            written.push(path);
        }
        if cfg.render && document.mesh.dim() == 2 {
            let opts = SvgOptions {
                layers: cfg.layers.parse()?,
                caption: Some(format!("N = {}, mode = {}, max residual = {:.3e}", points.len(), mode, solution.max_residual)),
                ..SvgOptions::default()
            };
            let path = cfg.out.join("mesh.svg");
            std::fs::write(&path, render_svg(&document.mesh, &document.radii, &opts)?)?;
            written.push(path);
        }
        Ok(written)
    })?;

    let mut summary = Summary {
        dimension: cfg.dim,
        points: points.len(),
        seed: cfg.seed,
        mode,
        status,
        exit_code: if cfg.allow_invalid { 0 } else { status.exit_code() },
        solver: SolverSummary {
            objective: solution.objective,
            max_residual: solution.max_residual,
            residual_threshold: cfg.tolerances.residual,
            evaluations: solution.minimum.as_ref().map(|m| m.evaluations),
        },
        validation,
        artifacts,
        timings: clock.timings,
    };
    let path = cfg.out.join("summary.json");
    summary.artifacts.push(path.clone());
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    std::fs::write(&path, text).map_err(|e| Error::from(e).at("export"))?;
    Ok(RunOutcome { summary, document, solution })
}
