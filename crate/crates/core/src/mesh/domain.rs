//! Convex regions that boundary cells are clipped to.

use nalgebra::{Vector2, Vector3};

use super::clip::{box_faces, clip_polyhedron_all, polygon_area, polyhedron_volume, Plane};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};

/// Axis-aligned box enlarged by `inflate` times its extent on every side.
fn inflated_box<const D: usize>(points: &[nalgebra::Point<f64, D>], inflate: f64) -> ([f64; D], [f64; D]) {
    let mut lo = [f64::INFINITY; D];
    let mut hi = [f64::NEG_INFINITY; D];
    for p in points {
        for d in 0..D {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    for d in 0..D {
        let pad = inflate * (hi[d] - lo[d]);
        lo[d] -= pad;
        hi[d] += pad;
    }
    (lo, hi)
}

/// Convex polygon, counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain2 {
    pub vertices: Vec<Point2>,
}

impl Domain2 {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidConfig("domain polygon needs at least 3 vertices".into()));
        }
        for k in 0..n {
            let (a, b, c) = (vertices[k], vertices[(k + 1) % n], vertices[(k + 2) % n]);
            if (b - a).perp(&(c - b)) <= 0.0 {
                return Err(Error::InvalidConfig(format!("domain polygon is not strictly convex and counter-clockwise at vertex {}", (k + 1) % n)));
            }
        }
        Ok(Domain2 { vertices })
    }

    pub fn rectangle(lo: Point2, hi: Point2) -> Result<Self> {
        Self::new(vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)])
    }

    /// Bounding box of `points` grown by `inflate` of its extent on each side.
    pub fn around(points: &[Point2], inflate: f64) -> Result<Self> {
        let (lo, hi) = inflated_box(points, inflate);
        Self::rectangle(Point2::new(lo[0], lo[1]), Point2::new(hi[0], hi[1]))
    }

    /// Edge lines with outward normals.
    pub fn planes(&self) -> Vec<Plane<2>> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
                let e = b - a;
                Plane::through(&a, Vector2::new(e.y, -e.x).normalize())
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Center and radius of a ball containing the domain.
    pub fn ball(&self) -> (Point2, f64) {
        let c = Point2::from(self.vertices.iter().map(|v| v.coords).sum::<Vector2<f64>>() / self.vertices.len() as f64);
        (c, self.vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max))
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        v.iter().flat_map(|a| v.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max)
    }

    /// Strictly inside.
    pub fn contains(&self, p: &Point2) -> bool {
        self.planes().iter().all(|pl| pl.signed(p) < 0.0)
    }
}

/// Convex polyhedron given by outward half-spaces `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain3 {
    pub planes: Vec<([f64; 3], f64)>,
    /// Boundary faces, outward.
    faces: Vec<Vec<Point3>>,
}

impl Domain3 {
    /// The region is computed by clipping `extent`, a box known to contain it.
    pub fn from_planes(planes: Vec<([f64; 3], f64)>, extent: (Point3, Point3)) -> Result<Self> {
        let start: Vec<(Vec<Point3>, bool)> = box_faces(&extent.0, &extent.1).into_iter().map(|f| (f.to_vec(), false)).collect();
        let ps: Vec<Plane<3>> = planes.iter().map(|(n, o)| Plane::new(Vector3::from(*n), *o)).collect();
        let faces: Vec<Vec<Point3>> = clip_polyhedron_all(start, &ps, true)
            .ok_or_else(|| Error::InvalidConfig("domain planes do not bound a region".into()))?
            .into_iter()
            .map(|f| f.0)
            .collect();
        let d = Domain3 { planes, faces };
        if d.volume() <= 0.0 {
            return Err(Error::InvalidConfig("domain is empty".into()));
        }
        Ok(d)
    }

    /// Reassemble from stored planes and boundary faces.
    pub(crate) fn from_parts(planes: Vec<([f64; 3], f64)>, faces: Vec<Vec<Point3>>) -> Self {
        Domain3 { planes, faces }
    }

    pub fn cuboid(lo: Point3, hi: Point3) -> Result<Self> {
        if !(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z) {
            return Err(Error::InvalidConfig("domain box has non-positive extent".into()));
        }
        let planes = vec![
            ([-1.0, 0.0, 0.0], -lo.x),
            ([1.0, 0.0, 0.0], hi.x),
            ([0.0, -1.0, 0.0], -lo.y),
            ([0.0, 1.0, 0.0], hi.y),
            ([0.0, 0.0, -1.0], -lo.z),
            ([0.0, 0.0, 1.0], hi.z),
        ];
        let faces = box_faces(&lo, &hi).into_iter().map(|f| f.to_vec()).collect();
        Ok(Domain3 { planes, faces })
    }

    pub fn around(points: &[Point3], inflate: f64) -> Result<Self> {
        let (lo, hi) = inflated_box(points, inflate);
        Self::cuboid(Point3::from(lo), Point3::from(hi))
    }

    pub fn planes(&self) -> Vec<Plane<3>> {
        self.planes.iter().map(|(n, o)| Plane::new(Vector3::from(*n), *o)).collect()
    }

    pub fn faces(&self) -> &[Vec<Point3>] {
        &self.faces
    }

    pub fn volume(&self) -> f64 {
        polyhedron_volume(&self.faces.iter().map(Vec::as_slice).collect::<Vec<_>>())
    }

    fn vertices(&self) -> impl Iterator<Item = &Point3> {
        self.faces.iter().flatten()
    }

    pub fn ball(&self) -> (Point3, f64) {
        let n = self.vertices().count().max(1) as f64;
        let c = Point3::from(self.vertices().map(|v| v.coords).sum::<Vector3<f64>>() / n);
        (c, self.vertices().map(|v| (v - c).norm()).fold(0.0, f64::max))
    }

    pub fn diameter(&self) -> f64 {
        self.vertices().flat_map(|a| self.vertices().map(move |b| (a - b).norm())).fold(0.0, f64::max)
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.planes().iter().all(|pl| pl.signed(p) < 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inflated_square() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 2.0)];
        let d = Domain2::around(&pts, 0.05).unwrap();
        assert_relative_eq!(d.area(), 1.1 * 2.2, max_relative = 1e-14);
        assert!(pts.iter().all(|p| d.contains(p)));
    }

    #[test]
    fn clockwise_polygon_is_rejected() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)];
        assert!(Domain2::new(v).is_err());
    }

    #[test]
    fn halved_cube_from_planes() {
        let planes = vec![
            ([-1.0, 0.0, 0.0], 0.0),
            ([0.0, -1.0, 0.0], 0.0),
            ([0.0, 0.0, -1.0], 0.0),
            ([1.0, 1.0, 1.0], 1.0),
        ];
        let d = Domain3::from_planes(planes, (Point3::new(-1.0, -1.0, -1.0), Point3::new(2.0, 2.0, 2.0))).unwrap();
        assert_relative_eq!(d.volume(), 1.0 / 6.0, max_relative = 1e-13);
        assert!(d.contains(&Point3::new(0.1, 0.1, 0.1)));
        assert!(!d.contains(&Point3::new(0.5, 0.5, 0.5)));
    }

    #[test]
    fn cuboid_volume_and_ball() {
        let d = Domain3::cuboid(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 2.0, 3.0)).unwrap();
        assert_relative_eq!(d.volume(), 6.0, max_relative = 1e-14);
        let (c, r) = d.ball();
        assert_relative_eq!(c, Point3::new(0.5, 1.0, 1.5), epsilon = 1e-14);
        assert_relative_eq!(r, 14f64.sqrt() / 2.0, max_relative = 1e-14);
    }
}
