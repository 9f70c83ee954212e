//! Closed-form geometric primitives: distances, point-to-line and
//! point-to-plane distances, triangle classification and the height
//! functions that bound the admissible radius at a point.
//!
//! Everything here is a pure function of its arguments.

use nalgebra::{Point, SVector};

use crate::error::{Error, Result};

pub type Point2 = nalgebra::Point2<f64>;
pub type Point3 = nalgebra::Point3<f64>;

/// Cosine magnitude below which an angle is classified as right.
pub const EPS_RIGHT: f64 = 1e-9;
/// Relative area tolerance for collinear triangles.
pub const EPS_AREA: f64 = 1e-12;
/// Relative volume tolerance for coplanar tetrahedra.
pub const EPS_VOL: f64 = 1e-12;
/// Relative length tolerance for coincident points.
pub const EPS_LEN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleKind {
    Acute,
    Right,
    Obtuse,
}

/// Classification of a triangle. `vertex` is the local index (0, 1 or 2)
/// of the right or obtuse corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleShape {
    pub kind: TriangleKind,
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightSource {
    PerpendicularFoot,
    EdgeLengthFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightValue {
    pub value: f64,
    pub source: HeightSource,
}

pub fn distance2(p: &Point2, q: &Point2) -> f64 {
    ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt()
}

pub fn distance3(p: &Point3, q: &Point3) -> f64 {
    ((p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2)).sqrt()
}

/// Area of the triangle spanned by `u` and `v` from a common corner, via the
/// Gram determinant so it works in any dimension.
fn gram_area<const D: usize>(u: &SVector<f64, D>, v: &SVector<f64, D>) -> f64 {
    let g = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
    0.5 * g.max(0.0).sqrt()
}

fn classify<const D: usize>(p: [&Point<f64, D>; 3]) -> Result<TriangleShape> {
    let e01 = p[1] - p[0];
    let e02 = p[2] - p[0];
    let e12 = p[2] - p[1];
    let longest = e01.norm().max(e02.norm()).max(e12.norm());
    if longest == 0.0 || gram_area(&e01, &e02) <= EPS_AREA * longest * longest {
        return Err(Error::DegenerateTriangle);
    }
    let mut worst: Option<(usize, f64)> = None;
    for k in 0..3 {
        let a = p[(k + 1) % 3] - p[k];
        let b = p[(k + 2) % 3] - p[k];
        let cos = a.dot(&b) / (a.norm() * b.norm());
        if cos <= EPS_RIGHT && worst.is_none_or(|(_, c)| cos < c) {
            worst = Some((k, cos));
        }
    }
    Ok(match worst {
        None => TriangleShape {
            kind: TriangleKind::Acute,
            vertex: None,
        },
        Some((k, cos)) if cos.abs() <= EPS_RIGHT => TriangleShape {
            kind: TriangleKind::Right,
            vertex: Some(k),
        },
        Some((k, _)) => TriangleShape {
            kind: TriangleKind::Obtuse,
            vertex: Some(k),
        },
    })
}

/// Classify a planar triangle as acute, right or obtuse.
pub fn classify_triangle(p1: &Point2, p2: &Point2, p3: &Point2) -> Result<TriangleShape> {
    classify([p1, p2, p3])
}

/// Classify a triangle embedded in space (a wall of a tetrahedron).
pub fn classify_triangle3(p1: &Point3, p2: &Point3, p3: &Point3) -> Result<TriangleShape> {
    classify([p1, p2, p3])
}

/// Perpendicular distance from `p` to the infinite line through `a` and `b`.
pub fn point_line_distance2(p: &Point2, a: &Point2, b: &Point2) -> Result<f64> {
    let db = b - a;
    let len = db.norm();
    if len <= EPS_LEN * a.coords.abs().max().max(b.coords.abs().max()).max(1.0) {
        return Err(Error::DegenerateSegment);
    }
    let dp = p - a;
    Ok((db.x * dp.y - db.y * dp.x).abs() / len)
}

/// Perpendicular distance from `p` to the line through `a` and `b` in space,
/// `|(p - a) x (b - a)| / |b - a|`.
pub fn point_line_distance3(p: &Point3, a: &Point3, b: &Point3) -> Result<f64> {
    let base = b - a;
    let len = base.norm();
    if len <= EPS_LEN * a.coords.abs().max().max(b.coords.abs().max()).max(1.0) {
        return Err(Error::DegenerateSegment);
    }
    Ok((p - a).cross(&base).norm() / len)
}

/// Height of triangle (i, j, k) seen from `i`.
///
/// Acute triangles use the perpendicular distance from `i` to the opposite
/// side; right and obtuse triangles fall back to the shorter of the two
/// sides meeting at `i`.
pub fn neighbor_height2(i: &Point2, jk: &Point2, jk1: &Point2) -> Result<HeightValue> {
    let shape = classify_triangle(i, jk, jk1)?;
    height_from_shape(shape, || point_line_distance2(i, jk, jk1), distance2(i, jk), distance2(i, jk1))
}

/// Height of a wall triangle (i, j, k) of a tetrahedron, seen from `i`.
pub fn neighbor_height3(i: &Point3, jl: &Point3, jl1: &Point3) -> Result<HeightValue> {
    let shape = classify_triangle3(i, jl, jl1)?;
    height_from_shape(shape, || point_line_distance3(i, jl, jl1), distance3(i, jl), distance3(i, jl1))
}

fn height_from_shape(
    shape: TriangleShape,
    foot: impl FnOnce() -> Result<f64>,
    l1: f64,
    l2: f64,
) -> Result<HeightValue> {
    match shape.kind {
        TriangleKind::Acute => Ok(HeightValue {
            value: foot()?,
            source: HeightSource::PerpendicularFoot,
        }),
        TriangleKind::Right | TriangleKind::Obtuse => Ok(HeightValue {
            value: l1.min(l2),
            source: HeightSource::EdgeLengthFallback,
        }),
    }
}

/// Plane `A x + B y + C z + D = 0` through three points.
pub fn plane_through(j1: &Point3, j2: &Point3, j3: &Point3) -> [f64; 4] {
    let (d21, m21, n21) = (j2.x - j1.x, j2.y - j1.y, j2.z - j1.z);
    let (d31, m31, n31) = (j3.x - j1.x, j3.y - j1.y, j3.z - j1.z);
    let a = m21 * n31 - m31 * n21;
    let b = d31 * n21 - d21 * n31;
    let c = d21 * m31 - d31 * m21;
    let d = -a * j1.x - b * j1.y - c * j1.z;
    [a, b, c, d]
}

/// Signed volume of the tetrahedron (a, b, c, d); positive when `d` lies on
/// the side of `abc` that sees it counter-clockwise.
pub fn signed_volume(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

/// Barycentric coordinates of `p` with respect to triangle (a, b, c),
/// computed in the triangle's plane.
pub fn barycentric3(p: &Point3, a: &Point3, b: &Point3, c: &Point3) -> [f64; 3] {
    let v0 = b - a;
    let v1 = c - a;
    let v2 = p - a;
    let d00 = v0.dot(&v0);
    let d01 = v0.dot(&v1);
    let d11 = v1.dot(&v1);
    let d20 = v2.dot(&v0);
    let d21 = v2.dot(&v1);
    let den = d00 * d11 - d01 * d01;
    let v = (d11 * d20 - d01 * d21) / den;
    let w = (d00 * d21 - d01 * d20) / den;
    [1.0 - v - w, v, w]
}

/// Height of tetrahedron (i, j1, j2, j3) seen from `i`.
///
/// When the foot of the perpendicular from `i` falls inside the opposite face
/// (boundary included) the plane distance is returned. Otherwise the minimum
/// of the three wall-triangle heights at `i` is used.
pub fn tetra_height(i: &Point3, j1: &Point3, j2: &Point3, j3: &Point3) -> Result<HeightValue> {
    let pts = [i, j1, j2, j3];
    let mut longest: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            longest = longest.max(distance3(pts[a], pts[b]));
        }
    }
    let vol = signed_volume(i, j1, j2, j3).abs();
    if longest == 0.0 || vol <= EPS_VOL * longest.powi(3) {
        return Err(Error::DegenerateTetrahedron);
    }
    let [a, b, c, d] = plane_through(j1, j2, j3);
    let norm = (a * a + b * b + c * c).sqrt();
    let signed = (a * i.x + b * i.y + c * i.z + d) / norm;
    let foot = Point3::new(i.x - signed * a / norm, i.y - signed * b / norm, i.z - signed * c / norm);
    let bary = barycentric3(&foot, j1, j2, j3);
    if bary.iter().all(|&w| w >= -1e-12) {
        return Ok(HeightValue {
            value: signed.abs(),
            source: HeightSource::PerpendicularFoot,
        });
    }
    let ring = [j1, j2, j3];
    let mut best = f64::INFINITY;
    for l in 0..3 {
        let h = neighbor_height3(i, ring[l], ring[(l + 1) % 3])?;
        best = best.min(h.value);
    }
    Ok(HeightValue {
        value: best,
        source: HeightSource::EdgeLengthFallback,
    })
}
