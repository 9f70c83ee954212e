use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvmesh::complex::{PlanarComplex, SpatialComplex};
use cvmesh::error::{Error, Result};
use cvmesh::io::json::{points_from_json, points_to_json, radii_from_json, radii_to_json, triangulation_to_json};
use cvmesh::io::{export_mesh, generate_points, import_mesh, mesh_to_json, render_svg, AnyMesh, Format, Layers, MeshDocument, PointSet, RadiiDocument, SvgOptions, ValidationReport};
use cvmesh::mesh::{build_volumes2, build_volumes3, validate_global, validate_perpendicularity, BuildOptions};
use cvmesh::pipeline::{error_exit_code, run_pipeline, DomainBox, RunConfig};
use cvmesh::solver::{solve_radii, RadiusMode, SolveOptions};

#[derive(Parser)]
#[command(name = "cvmesh", version, about = "Control-volume meshes from intersecting circles and spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random points.
    Gen(GenArgs),
    /// Delaunay triangulation of a points file.
    Tri(TriArgs),
    /// Choose radii for a points file.
    Solve(SolveArgs),
    /// Build the cells from a radii file.
    Build(BuildArgs),
    /// Check a mesh file.
    Validate(ValidateArgs),
    /// Convert a mesh file.
    Export(ExportArgs),
    /// Draw a planar mesh file as SVG.
    Render(RenderArgs),
    /// All stages in one go.
    Run(RunArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "points.json")]
    out: PathBuf,
}

#[derive(Args)]
struct TriArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long, default_value = "triangulation.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<RadiusMode>,
    #[arg(long)]
    equal_radii: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "radii.json")]
    out: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    radii: PathBuf,
    /// Fail on the first non-convex cell or warped face.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = "mesh.json")]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol_perp: f64,
    /// Store the report in the mesh file.
    #[arg(long)]
    write: bool,
    #[arg(long)]
    allow_invalid: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, default_value = "all")]
    layers: String,
    #[arg(long, default_value = "mesh.svg")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<RadiusMode>,
    #[arg(long)]
    equal_radii: bool,
    /// Points file to use instead of generating.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh formats, comma-separated.
    #[arg(long, value_delimiter = ',')]
    format: Vec<String>,
    #[arg(long)]
    tol_perp: Option<f64>,
    #[arg(long)]
    residual: Option<f64>,
    #[arg(long)]
    render: bool,
    #[arg(long)]
    layers: Option<String>,
    #[arg(long)]
    allow_invalid: bool,
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn gen(a: GenArgs) -> Result<i32> {
    let mut cfg = load_config(&a.config)?;
    if let Some(d) = a.dim {
        cfg.dim = d;
        if cfg.domain.as_ref().is_some_and(|b| b.lo.len() != d) {
            cfg.domain = Some(DomainBox::unit(d));
        }
    }
    cfg.n = a.n.unwrap_or(cfg.n);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.validate()?;
    let b = cfg.domain_box();
    let pts = generate_points(cfg.n, cfg.seed, &b.lo, &b.hi)?;
    write(&a.out, &points_to_json(&pts)?)?;
    println!("{} points -> {}", pts.len(), a.out.display());
    Ok(0)
}

fn tri(a: TriArgs) -> Result<i32> {
    let pts = points_from_json(&read(&a.points)?)?;
    let simplices: Vec<Vec<usize>> = match &pts {
        PointSet::Planar(p) => PlanarComplex::new(p.clone())?.tri.simplices.iter().map(|s| s.to_vec()).collect(),
        PointSet::Spatial(p) => SpatialComplex::new(p.clone())?.tet.simplices.iter().map(|s| s.to_vec()).collect(),
    };
    write(&a.out, &triangulation_to_json(&pts, &simplices)?)?;
    println!("{} simplices -> {}", simplices.len(), a.out.display());
    Ok(0)
}

fn solve(a: SolveArgs) -> Result<i32> {
    let mut cfg = load_config(&a.config)?;
    cfg.mode = a.mode.unwrap_or(cfg.mode);
    cfg.equal_radii |= a.equal_radii;
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    let pts = points_from_json(&read(&a.points)?)?;
    let mode = cfg.effective_mode();
    let opts = SolveOptions {
        seed: cfg.seed,
        warm_start: None,
        reduction: cfg.reduction,
    };
    let sol = match &pts {
        PointSet::Planar(p) => solve_radii(&PlanarComplex::new(p.clone())?, mode, &opts, &cfg.optimizer)?,
        PointSet::Spatial(p) => solve_radii(&SpatialComplex::new(p.clone())?, mode, &opts, &cfg.optimizer)?,
    };
    let doc = RadiiDocument {
        points: pts,
        mode,
        radii: sol.radii.r.clone(),
        bounds: sol.bounds.clone(),
        objective: sol.objective,
        max_residual: sol.max_residual,
    };
    write(&a.out, &radii_to_json(&doc)?)?;
    println!("max residual: {:.3e}", sol.max_residual);
    let ok = mode != RadiusMode::ExactIntersection || sol.max_residual < cfg.tolerances.residual;
    Ok(if ok { 0 } else { 3 })
}

fn build(a: BuildArgs) -> Result<i32> {
    let doc = radii_from_json(&read(&a.radii)?)?;
    let mesh = match &doc.points {
        PointSet::Planar(p) => {
            let opts = BuildOptions { domain: None, strict: a.strict };
            AnyMesh::Planar(build_volumes2(&PlanarComplex::new(p.clone())?, &doc.radii, &opts)?)
        }
        PointSet::Spatial(p) => {
            let opts = BuildOptions { domain: None, strict: a.strict };
            AnyMesh::Spatial(build_volumes3(&SpatialComplex::new(p.clone())?, &doc.radii, &opts)?)
        }
    };
    for d in mesh.diagnostics() {
        eprintln!("warning: {d}");
    }
    let out = MeshDocument {
        mesh,
        radii: doc.radii,
        mode: Some(doc.mode),
        validation: None,
    };
    write(&a.out, &mesh_to_json(&out)?)?;
    println!("{} cells -> {}", out.mesh.n_points(), a.out.display());
    Ok(if out.mesh.diagnostics().is_empty() { 0 } else { 2 })
}

fn validate(a: ValidateArgs) -> Result<i32> {
    let mut doc = import_mesh(&a.mesh)?;
    let cv = doc.mesh.as_cv();
    let report = ValidationReport {
        perpendicularity: validate_perpendicularity(cv, a.tol_perp),
        global: validate_global(cv),
    };
    let p = &report.perpendicularity;
    println!("perpendicularity: {} pairs, max angle {:.3e} rad, {} above {:e}", p.checked, p.max_angle, p.violations.len(), p.tol);
    for v in p.violations.iter().take(10) {
        println!("  cells {} / {}: {:.3e} rad", v.cell, v.neighbor, v.angle);
    }
    let g = &report.global;
    println!(
        "global: {} face mismatches, {} overlaps ({} probes), {} owners outside, {} foreign points",
        g.face_mismatches.len(),
        g.overlaps.len(),
        g.probes,
        g.owners_outside.len(),
        g.foreign_points.len()
    );
    for (i, j) in g.face_mismatches.iter().chain(&g.overlaps).take(10) {
        println!("  cells {i} / {j}");
    }
    for d in doc.mesh.diagnostics() {
        println!("  {d}");
    }
    let passed = report.passed() && doc.mesh.diagnostics().is_empty();
    if a.write {
        doc.validation = Some(report);
        write(&a.mesh, &mesh_to_json(&doc)?)?;
    }
    Ok(if passed || a.allow_invalid { 0 } else { 2 })
}

fn export(a: ExportArgs) -> Result<i32> {
    let format: Format = a.format.parse()?;
    let doc = import_mesh(&a.mesh)?;
    export_mesh(&doc, format, &a.out)?;
    println!("{} -> {}", format, a.out.display());
    Ok(0)
}

fn render(a: RenderArgs) -> Result<i32> {
    let doc = import_mesh(&a.mesh)?;
    let opts = SvgOptions {
        layers: a.layers.parse::<Layers>()?,
        ..SvgOptions::default()
    };
    write(&a.out, &render_svg(&doc.mesh, &doc.radii, &opts)?)?;
    println!("svg -> {}", a.out.display());
    Ok(0)
}

fn run(a: RunArgs) -> Result<i32> {
    let mut cfg = load_config(&a.config)?;
    if let Some(d) = a.dim {
        cfg.dim = d;
    }
    cfg.n = a.n.unwrap_or(cfg.n);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.mode = a.mode.unwrap_or(cfg.mode);
    cfg.equal_radii |= a.equal_radii;
    cfg.points = a.points.or(cfg.points);
    cfg.out = a.out.unwrap_or(cfg.out);
    if !a.format.is_empty() {
        cfg.formats = a.format.iter().map(|f| f.parse()).collect::<Result<_>>()?;
    }
    cfg.tolerances.perp = a.tol_perp.unwrap_or(cfg.tolerances.perp);
    cfg.tolerances.residual = a.residual.unwrap_or(cfg.tolerances.residual);
    cfg.render |= a.render;
    cfg.layers = a.layers.unwrap_or(cfg.layers);
    cfg.allow_invalid |= a.allow_invalid;

    let outcome = run_pipeline(&cfg)?;
    let s = &outcome.summary;
    println!("max residual: {:.3e} (threshold {:e})", s.solver.max_residual, s.solver.residual_threshold);
    println!(
        "perpendicularity violations: {} (max angle {:.3e} rad), overlaps: {}, face mismatches: {}, build diagnostics: {}",
        s.validation.perpendicularity_violations, s.validation.max_angle, s.validation.overlaps, s.validation.face_mismatches, s.validation.build_diagnostics
    );
    if let Some(r) = &outcome.document.validation {
        for v in r.perpendicularity.violations.iter().take(10) {
            println!("  cells {} / {}: {:.3e} rad", v.cell, v.neighbor, v.angle);
        }
    }
    for p in &s.artifacts {
        println!("wrote {}", p.display());
    }
    println!("status: {:?}", s.status);
    Ok(s.exit_code)
}

fn set_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CVMESH_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::InvalidConfig(format!("CVMESH_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(Error::InvalidConfig("CVMESH_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (stage, result) = match cli.command {
        Command::Gen(a) => ("gen", set_threads().and_then(|_| gen(a))),
        Command::Tri(a) => ("tri", set_threads().and_then(|_| tri(a))),
        Command::Solve(a) => ("solve", set_threads().and_then(|_| solve(a))),
        Command::Build(a) => ("build", set_threads().and_then(|_| build(a))),
        Command::Validate(a) => ("validate", set_threads().and_then(|_| validate(a))),
        Command::Export(a) => ("export", set_threads().and_then(|_| export(a))),
        Command::Render(a) => ("render", set_threads().and_then(|_| render(a))),
        Command::Run(a) => ("run", set_threads().and_then(|_| run(a))),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let e = match e {
                Error::Stage { .. } => e,
                e => e.at(stage),
            };
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
