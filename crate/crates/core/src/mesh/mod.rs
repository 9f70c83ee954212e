//! Control volumes assembled from the candidate vertices of each simplex.
//!
//! The cell of point `i` collects the vertex of every simplex incident to `i`.
//! Cells of hull points are unbounded; they are closed with far points placed
//! well outside the domain and then clipped to the domain.

pub mod clip;
pub mod domain;
mod planar;
mod pool;
mod spatial;
pub mod validate;

use serde::{Deserialize, Serialize};

pub use domain::{Domain2, Domain3};
pub use planar::build_volumes2;
pub use spatial::build_volumes3;
pub use validate::{probe_overlaps, validate_global, validate_perpendicularity, ControlVolumeMesh, GlobalReport, PerpReport, PerpViolation};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};

/// Growth of the points' bounding box used when no domain is given.
pub const DEFAULT_INFLATE: f64 = 0.05;
/// Far points start this many domain diameters out.
const FAR_FACTOR: f64 = 1e3;
/// Vertices closer than this fraction of the domain diameter are merged.
const MERGE_TOL: f64 = 1e-10;
/// Allowed face warp, relative to the distance between the two owners.
pub const EPS_FACE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions<D> {
    /// Convex clipping region; the inflated bounding box when `None`.
    pub domain: Option<D>,
    /// Fail on the first non-convex cell or warped face instead of listing
    /// them in the diagnostics.
    pub strict: bool,
}

impl<D> Default for BuildOptions<D> {
    fn default() -> Self {
        BuildOptions { domain: None, strict: true }
    }
}

/// Polygonal cell; edge `k` runs from `vertices[k]` to `vertices[k + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell2 {
    pub owner: usize,
    /// Counter-clockwise.
    pub vertices: Vec<usize>,
    /// Point across each edge; `None` on the domain boundary.
    pub neighbors: Vec<Option<usize>>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Counter-clockwise seen from outside the cell.
    pub vertices: Vec<usize>,
    pub neighbor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell3 {
    pub owner: usize,
    pub faces: Vec<Face>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2 {
    /// Generator points.
    pub points: Vec<Point2>,
    pub vertices: Vec<Point2>,
    /// One per point, in point order.
    pub cells: Vec<Cell2>,
    pub domain: Domain2,
    /// Candidate vertex of each triangle, before clipping.
    pub candidates: Vec<Point2>,
    pub diagnostics: Vec<Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh3 {
    pub points: Vec<Point3>,
    pub vertices: Vec<Point3>,
    pub cells: Vec<Cell3>,
    pub domain: Domain3,
    pub candidates: Vec<Point3>,
    pub diagnostics: Vec<Error>,
}

impl Mesh2 {
    pub fn polygon(&self, cell: usize) -> Vec<Point2> {
        self.cells[cell].vertices.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn area(&self, cell: usize) -> f64 {
        clip::polygon_area(&self.polygon(cell))
    }
}

impl Mesh3 {
    pub fn face_points(&self, face: &Face) -> Vec<Point3> {
        face.vertices.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn volume(&self, cell: usize) -> f64 {
        let faces: Vec<Vec<Point3>> = self.cells[cell].faces.iter().map(|f| self.face_points(f)).collect();
        clip::polyhedron_volume(&faces.iter().map(Vec::as_slice).collect::<Vec<_>>())
    }
}

/// Every simplex must show up in the cell of each of its corners.
fn check_orphans(n_simplices: usize, incidences: impl Iterator<Item = usize>, per_simplex: usize) -> Result<()> {
    let mut count = vec![0usize; n_simplices];
    for s in incidences {
        count[s] += 1;
    }
    match count.iter().position(|&c| c != per_simplex) {
        Some(simplex) => Err(Error::OrphanVertex { simplex }),
        None => Ok(()),
    }
}

/// Remove zero-length edges from a closed loop of pooled vertex ids, each
/// carrying the label of the edge arriving at it.
fn dedup_loop<L: Copy>(items: &[(usize, L)]) -> Vec<(usize, L)> {
    let mut out: Vec<(usize, L)> = Vec::with_capacity(items.len());
    for &it in items {
        if out.last().is_none_or(|last| last.0 != it.0) {
            out.push(it);
        }
    }
    while out.len() > 1 && out[out.len() - 1].0 == out[0].0 {
        let last = out.pop().unwrap();
        out[0].1 = last.1;
    }
    out
}
