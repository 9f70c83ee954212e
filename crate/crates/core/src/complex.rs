//! A point set bundled with its Delaunay decomposition and neighborhoods.
//!
//! The radius solver only needs a dimension-free view of this data, exposed
//! through [`Complex`]; the mesh builder works with the concrete types.

use crate::delaunay::{tetrahedralize3, triangulate2, NeighborMap2, NeighborMap3, Triangulation2, Triangulation3};
use crate::error::Result;
use crate::geometry::{Point2, Point3};
use crate::solver::bounds::{all_bounds2, all_bounds3, RadiusBounds};
use crate::solver::vertex::{power, vertex2, vertex3};

/// Dimension-independent view used by the objective and the strategies.
pub trait Complex: Sync {
    fn dim(&self) -> usize;
    fn n_points(&self) -> usize;
    fn n_simplices(&self) -> usize;
    fn bounds(&self) -> Result<Vec<RadiusBounds>>;
    /// Neighbor pairs `(i, j)`, `i < j`.
    fn edges(&self) -> Vec<(usize, usize)>;
    fn edge_length(&self, i: usize, j: usize) -> f64;
    /// Power of simplex `s`'s radical center divided by the squared mean edge
    /// length of `s`. Zero iff the simplex's circles meet in one point.
    fn scaled_power(&self, s: usize, radii: &[f64]) -> Result<f64>;
    /// Shortest Delaunay edge.
    fn shortest_edge(&self) -> f64 {
        self.edges()
            .into_iter()
            .map(|(i, j)| self.edge_length(i, j))
            .fold(f64::INFINITY, f64::min)
    }
}

fn mean_edge<const D: usize, const K: usize>(pts: &[nalgebra::Point<f64, D>], s: &[usize; K]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0;
    for a in 0..K {
        for b in a + 1..K {
            sum += (pts[s[a]] - pts[s[b]]).norm();
            count += 1;
        }
    }
    sum / count as f64
}

#[derive(Debug, Clone)]
pub struct PlanarComplex {
    pub points: Vec<Point2>,
    pub tri: Triangulation2,
    pub nm: NeighborMap2,
    mean_edges: Vec<f64>,
}

impl PlanarComplex {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        let tri = triangulate2(&points)?;
        Ok(Self::from_parts(points, tri))
    }

    pub fn from_parts(points: Vec<Point2>, tri: Triangulation2) -> Self {
        let nm = NeighborMap2::build(&tri, points.len());
        let mean_edges = tri.simplices.iter().map(|s| mean_edge(&points, s)).collect();
        PlanarComplex {
            points,
            tri,
            nm,
            mean_edges,
        }
    }

    pub fn corners(&self, s: usize) -> [&Point2; 3] {
        self.tri.simplices[s].map(|v| &self.points[v])
    }

    pub fn radii_of(&self, s: usize, radii: &[f64]) -> [f64; 3] {
        self.tri.simplices[s].map(|v| radii[v])
    }
}

impl Complex for PlanarComplex {
    fn dim(&self) -> usize {
        2
    }
    fn n_points(&self) -> usize {
        self.points.len()
    }
    fn n_simplices(&self) -> usize {
        self.tri.len()
    }
    fn bounds(&self) -> Result<Vec<RadiusBounds>> {
        all_bounds2(&self.points, &self.nm)
    }
    fn edges(&self) -> Vec<(usize, usize)> {
        self.nm.edges()
    }
    fn edge_length(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).norm()
    }
    fn scaled_power(&self, s: usize, radii: &[f64]) -> Result<f64> {
        let c = self.corners(s);
        let r = self.radii_of(s, radii);
        let v = vertex2(c, r)?;
        Ok(power(&v.position, c[0], r[0]) / self.mean_edges[s].powi(2))
    }
}

#[derive(Debug, Clone)]
pub struct SpatialComplex {
    pub points: Vec<Point3>,
    pub tet: Triangulation3,
    pub nm: NeighborMap3,
    mean_edges: Vec<f64>,
}

impl SpatialComplex {
    pub fn new(points: Vec<Point3>) -> Result<Self> {
        let tet = tetrahedralize3(&points)?;
        Ok(Self::from_parts(points, tet))
    }

    pub fn from_parts(points: Vec<Point3>, tet: Triangulation3) -> Self {
        let nm = NeighborMap3::build(&tet, points.len());
        let mean_edges = tet.simplices.iter().map(|s| mean_edge(&points, s)).collect();
        SpatialComplex {
            points,
            tet,
            nm,
            mean_edges,
        }
    }

    pub fn corners(&self, s: usize) -> [&Point3; 4] {
        self.tet.simplices[s].map(|v| &self.points[v])
    }

    pub fn radii_of(&self, s: usize, radii: &[f64]) -> [f64; 4] {
        self.tet.simplices[s].map(|v| radii[v])
    }
}

impl Complex for SpatialComplex {
    fn dim(&self) -> usize {
        3
    }
    fn n_points(&self) -> usize {
        self.points.len()
    }
    fn n_simplices(&self) -> usize {
        self.tet.len()
    }
    fn bounds(&self) -> Result<Vec<RadiusBounds>> {
        all_bounds3(&self.points, &self.nm)
    }
    fn edges(&self) -> Vec<(usize, usize)> {
        self.nm.edges()
    }
    fn edge_length(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).norm()
    }
    fn scaled_power(&self, s: usize, radii: &[f64]) -> Result<f64> {
        let c = self.corners(s);
        let r = self.radii_of(s, radii);
        let v = vertex3(c, r)?;
        Ok(power(&v.position, c[0], r[0]) / self.mean_edges[s].powi(2))
    }
}
