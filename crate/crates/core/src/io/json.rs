//! JSON documents for points, triangulations, radii and meshes.
//!
//! Every document starts with `schema_version` and `kind`. Readers accept any
//! minor version of the supported major version. Floats are written in the
//! shortest form that parses back to the same bits.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::points::PointSet;
use super::{AnyMesh, MeshDocument};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::mesh::{Cell2, Cell3, Domain2, Domain3, Face, Mesh2, Mesh3};
use crate::solver::{RadiusBounds, RadiusMode};

pub const SCHEMA_VERSION: &str = "1.0";
const MAJOR: &str = "1";

fn check_header(v: &Value, kind: &str) -> Result<()> {
    let version = v
        .get("schema_version")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
    if version.split('.').next() != Some(MAJOR) {
        return Err(Error::SchemaVersion(version.to_string()));
    }
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(Error::Parse(format!("expected a `{kind}` document, found `{k}`"))),
        None => Err(Error::Parse("missing kind".into())),
    }
}

fn read<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text)?;
    check_header(&v, kind)?;
    Ok(serde_json::from_value(v)?)
}

fn write<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

fn header(kind: &str) -> (String, String) {
    (SCHEMA_VERSION.to_string(), kind.to_string())
}

fn c2(p: &Point2) -> Vec<f64> {
    vec![p.x, p.y]
}

fn c3(p: &Point3) -> Vec<f64> {
    vec![p.x, p.y, p.z]
}

fn p2(c: &[f64]) -> Result<Point2> {
    match c {
        [x, y] => Ok(Point2::new(*x, *y)),
        _ => Err(Error::DimensionMismatch { expected: 2, found: c.len() }),
    }
}

fn p3(c: &[f64]) -> Result<Point3> {
    match c {
        [x, y, z] => Ok(Point3::new(*x, *y, *z)),
        _ => Err(Error::DimensionMismatch { expected: 3, found: c.len() }),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFile {
    schema_version: String,
    kind: String,
    dimension: usize,
    points: Vec<Vec<f64>>,
}

pub fn points_to_json(points: &PointSet) -> Result<String> {
    let (schema_version, kind) = header("points");
    write(&PointsFile {
        schema_version,
        kind,
        dimension: points.dim(),
        points: points.coords(),
    })
}

pub fn points_from_json(text: &str) -> Result<PointSet> {
    let f: PointsFile = read(text, "points")?;
    PointSet::from_coords(f.dimension, &f.points)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangulationFile {
    schema_version: String,
    kind: String,
    dimension: usize,
    points: Vec<Vec<f64>>,
    simplices: Vec<Vec<usize>>,
}

pub fn triangulation_to_json(points: &PointSet, simplices: &[Vec<usize>]) -> Result<String> {
    let (schema_version, kind) = header("triangulation");
    write(&TriangulationFile {
        schema_version,
        kind,
        dimension: points.dim(),
        points: points.coords(),
        simplices: simplices.to_vec(),
    })
}

pub fn triangulation_from_json(text: &str) -> Result<(PointSet, Vec<Vec<usize>>)> {
    let f: TriangulationFile = read(text, "triangulation")?;
    Ok((PointSet::from_coords(f.dimension, &f.points)?, f.simplices))
}

/// Solved radii together with the points they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiiDocument {
    pub points: PointSet,
    pub mode: RadiusMode,
    pub radii: Vec<f64>,
    pub bounds: Option<Vec<RadiusBounds>>,
    pub objective: f64,
    pub max_residual: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadiiFile {
    schema_version: String,
    kind: String,
    dimension: usize,
    mode: RadiusMode,
    objective: f64,
    max_residual: f64,
    points: Vec<Vec<f64>>,
    radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bounds: Option<Vec<[f64; 2]>>,
}

pub fn radii_to_json(doc: &RadiiDocument) -> Result<String> {
    let (schema_version, kind) = header("radii");
    write(&RadiiFile {
        schema_version,
        kind,
        dimension: doc.points.dim(),
        mode: doc.mode,
        objective: doc.objective,
        max_residual: doc.max_residual,
        points: doc.points.coords(),
        radii: doc.radii.clone(),
        bounds: doc.bounds.as_ref().map(|b| b.iter().map(|b| [b.lo, b.hi]).collect()),
    })
}

pub fn radii_from_json(text: &str) -> Result<RadiiDocument> {
    let f: RadiiFile = read(text, "radii")?;
    let points = PointSet::from_coords(f.dimension, &f.points)?;
    if f.radii.len() != points.len() {
        return Err(Error::LengthMismatch { expected: points.len(), found: f.radii.len() });
    }
    Ok(RadiiDocument {
        points,
        mode: f.mode,
        radii: f.radii,
        bounds: f.bounds.map(|b| b.into_iter().map(|[lo, hi]| RadiusBounds { lo, hi, blocking: None }).collect()),
        objective: f.objective,
        max_residual: f.max_residual,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneFile {
    normal: [f64; 3],
    offset: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    planes: Option<Vec<PlaneFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    owner: usize,
    closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neighbors: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Face>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    schema_version: String,
    kind: String,
    dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<RadiusMode>,
    points: Vec<Vec<f64>>,
    radii: Vec<f64>,
    domain: DomainFile,
    vertices: Vec<Vec<f64>>,
    cells: Vec<CellFile>,
    candidates: Vec<Vec<f64>>,
    diagnostics: Vec<Error>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    validation: Option<super::ValidationReport>,
}

pub fn mesh_to_json(doc: &MeshDocument) -> Result<String> {
    if doc.mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let (schema_version, kind) = header("mesh");
    let mut f = MeshFile {
        schema_version,
        kind,
        dimension: doc.mesh.dim(),
        mode: doc.mode,
        points: Vec::new(),
        radii: doc.radii.clone(),
        domain: DomainFile { vertices: None, planes: None, faces: None },
        vertices: Vec::new(),
        cells: Vec::new(),
        candidates: Vec::new(),
        diagnostics: Vec::new(),
        validation: doc.validation.clone(),
    };
    match &doc.mesh {
        AnyMesh::Planar(m) => {
            f.points = m.points.iter().map(c2).collect();
            f.domain.vertices = Some(m.domain.vertices.iter().map(c2).collect());
            f.vertices = m.vertices.iter().map(c2).collect();
            f.cells = m
                .cells
                .iter()
                .map(|c| CellFile {
                    owner: c.owner,
                    closed: c.closed,
                    vertices: Some(c.vertices.clone()),
                    neighbors: Some(c.neighbors.clone()),
                    faces: None,
                })
                .collect();
            f.candidates = m.candidates.iter().map(c2).collect();
            f.diagnostics = m.diagnostics.clone();
        }
        AnyMesh::Spatial(m) => {
            f.points = m.points.iter().map(c3).collect();
            f.domain.planes = Some(m.domain.planes.iter().map(|(normal, offset)| PlaneFile { normal: *normal, offset: *offset }).collect());
            f.domain.faces = Some(m.domain.faces().iter().map(|face| face.iter().map(c3).collect()).collect());
            f.vertices = m.vertices.iter().map(c3).collect();
            f.cells = m
                .cells
                .iter()
                .map(|c| CellFile {
                    owner: c.owner,
                    closed: c.closed,
                    vertices: None,
                    neighbors: None,
                    faces: Some(c.faces.clone()),
                })
                .collect();
            f.candidates = m.candidates.iter().map(c3).collect();
            f.diagnostics = m.diagnostics.clone();
        }
    }
    write(&f)
}

fn missing(what: &str) -> Error {
    Error::Parse(format!("mesh document lacks `{what}`"))
}

pub fn mesh_from_json(text: &str) -> Result<MeshDocument> {
    let f: MeshFile = read(text, "mesh")?;
    let mesh = match f.dimension {
        2 => {
            let pts = |v: &[Vec<f64>]| v.iter().map(|c| p2(c)).collect::<Result<Vec<_>>>();
            let cells = f
                .cells
                .into_iter()
                .map(|c| {
                    Ok(Cell2 {
                        owner: c.owner,
                        closed: c.closed,
                        vertices: c.vertices.ok_or_else(|| missing("cells[].vertices"))?,
                        neighbors: c.neighbors.ok_or_else(|| missing("cells[].neighbors"))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            AnyMesh::Planar(Mesh2 {
                points: pts(&f.points)?,
                vertices: pts(&f.vertices)?,
                cells,
                domain: Domain2::new(pts(&f.domain.vertices.ok_or_else(|| missing("domain.vertices"))?)?)?,
                candidates: pts(&f.candidates)?,
                diagnostics: f.diagnostics,
            })
        }
        3 => {
            let pts = |v: &[Vec<f64>]| v.iter().map(|c| p3(c)).collect::<Result<Vec<_>>>();
            let cells = f
                .cells
                .into_iter()
                .map(|c| {
                    Ok(Cell3 {
                        owner: c.owner,
                        closed: c.closed,
                        faces: c.faces.ok_or_else(|| missing("cells[].faces"))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let planes = f.domain.planes.ok_or_else(|| missing("domain.planes"))?;
            let faces = f
                .domain
                .faces
                .ok_or_else(|| missing("domain.faces"))?
                .iter()
                .map(|face| pts(face))
                .collect::<Result<Vec<_>>>()?;
            AnyMesh::Spatial(Mesh3 {
                points: pts(&f.points)?,
                vertices: pts(&f.vertices)?,
                cells,
                domain: Domain3::from_parts(planes.into_iter().map(|p| (p.normal, p.offset)).collect(), faces),
                candidates: pts(&f.candidates)?,
                diagnostics: f.diagnostics,
            })
        }
        d => return Err(Error::InvalidConfig(format!("dimension must be 2 or 3, got {d}"))),
    };
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let n = mesh.n_points();
    if f.radii.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: f.radii.len() });
    }
    mesh.check_indices()?;
    Ok(MeshDocument {
        mesh,
        radii: f.radii,
        mode: f.mode,
        validation: f.validation,
    })
}
