//! Reading and writing points, radii and meshes; SVG pictures of planar meshes.

pub mod json;
pub mod points;
pub mod svg;
pub mod vtk;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{ControlVolumeMesh, GlobalReport, Mesh2, Mesh3, PerpReport};
use crate::solver::RadiusMode;

pub use json::{mesh_from_json, mesh_to_json, RadiiDocument};
pub use points::{generate_points, min_separation, PointSet};
pub use svg::{render_svg, Layers, SvgOptions};
pub use vtk::mesh_to_vtk;

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMesh {
    Planar(Mesh2),
    Spatial(Mesh3),
}

impl AnyMesh {
    pub fn dim(&self) -> usize {
        match self {
            AnyMesh::Planar(_) => 2,
            AnyMesh::Spatial(_) => 3,
        }
    }

    pub fn as_cv(&self) -> &dyn ControlVolumeMesh {
        match self {
            AnyMesh::Planar(m) => m,
            AnyMesh::Spatial(m) => m,
        }
    }

    pub fn n_points(&self) -> usize {
        self.as_cv().n_points()
    }

    pub fn is_empty(&self) -> bool {
        match self {
            AnyMesh::Planar(m) => m.cells.is_empty() || m.vertices.is_empty(),
            AnyMesh::Spatial(m) => m.cells.is_empty() || m.vertices.is_empty(),
        }
    }

    pub fn diagnostics(&self) -> &[Error] {
        match self {
            AnyMesh::Planar(m) => &m.diagnostics,
            AnyMesh::Spatial(m) => &m.diagnostics,
        }
    }

    /// Every index stored in the cells must point at something that exists.
    fn check_indices(&self) -> Result<()> {
        let n = self.n_points();
        let bad = |what: &str, cell: usize| Err(Error::Parse(format!("cell {cell}: {what} out of range")));
        let (nv, nc) = match self {
            AnyMesh::Planar(m) => (m.vertices.len(), m.cells.len()),
            AnyMesh::Spatial(m) => (m.vertices.len(), m.cells.len()),
        };
        for c in 0..nc {
            let (owner, verts, nbrs): (usize, Vec<usize>, Vec<usize>) = match self {
                AnyMesh::Planar(m) => (m.cells[c].owner, m.cells[c].vertices.clone(), m.cells[c].neighbors.iter().flatten().copied().collect()),
                AnyMesh::Spatial(m) => (
                    m.cells[c].owner,
                    m.cells[c].faces.iter().flat_map(|f| f.vertices.iter().copied()).collect(),
                    m.cells[c].faces.iter().filter_map(|f| f.neighbor).collect(),
                ),
            };
            if owner >= n {
                return bad("owner", c);
            }
            if verts.iter().any(|&v| v >= nv) {
                return bad("vertex index", c);
            }
            if nbrs.iter().any(|&j| j >= n) {
                return bad("neighbor index", c);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub perpendicularity: PerpReport,
    pub global: GlobalReport,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.perpendicularity.passed() && self.global.passed()
    }
}

/// A mesh with the radii it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshDocument {
    pub mesh: AnyMesh,
    pub radii: Vec<f64>,
    pub mode: Option<RadiusMode>,
    pub validation: Option<ValidationReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Vtk,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Vtk => "vtk",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "vtk" => Ok(Format::Vtk),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn mesh_to_string(doc: &MeshDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => mesh_to_json(doc),
        Format::Vtk => mesh_to_vtk(doc),
    }
}

/// Nothing is written unless the whole document serializes.
pub fn export_mesh(doc: &MeshDocument, format: Format, path: &Path) -> Result<()> {
    let text = mesh_to_string(doc, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn import_mesh(path: &Path) -> Result<MeshDocument> {
    mesh_from_json(&std::fs::read_to_string(path)?)
}
