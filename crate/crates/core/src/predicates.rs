//! Sign-exact orientation and in-sphere predicates.
//!
//! Thin wrappers over the adaptive-precision routines of the `robust` crate,
//! normalized to one convention: a simplex is positively oriented when its
//! signed measure is positive (counter-clockwise in the plane, right-handed in
//! space), and the in-sphere predicates are positive strictly inside.

use robust::{Coord, Coord3D};

use crate::geometry::{Point2, Point3};

fn c2(p: &Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

fn c3(p: &Point3) -> Coord3D<f64> {
    Coord3D {
        x: p.x,
        y: p.y,
        z: p.z,
    }
}

/// Positive when `a, b, c` are counter-clockwise.
pub fn orient2(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    robust::orient2d(c2(a), c2(b), c2(c))
}

/// Positive when `d` is strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`.
pub fn incircle(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> f64 {
    robust::incircle(c2(a), c2(b), c2(c), c2(d))
}

/// Positive when the tetrahedron `a, b, c, d` has positive signed volume.
pub fn orient3(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    -robust::orient3d(c3(a), c3(b), c3(c), c3(d))
}

/// Positive when `e` is strictly inside the sphere through the positively
/// oriented tetrahedron `a, b, c, d`.
pub fn insphere(a: &Point3, b: &Point3, c: &Point3, d: &Point3, e: &Point3) -> f64 {
    -robust::insphere(c3(a), c3(b), c3(c), c3(d), c3(e))
}

/// Whether `p`, assumed coplanar with triangle `a, b, c`, lies strictly inside
/// the triangle's circumcircle.
pub fn in_coplanar_circle(a: &Point3, b: &Point3, c: &Point3, p: &Point3) -> bool {
    let n = (b - a).cross(&(c - a));
    let axis = n.iamax();
    let project = |q: &Point3| match axis {
        0 => Point2::new(q.y, q.z),
        1 => Point2::new(q.z, q.x),
        _ => Point2::new(q.x, q.y),
    };
    let (pa, pb, pc, pp) = (project(a), project(b), project(c), project(p));
    let o = orient2(&pa, &pb, &pc);
    if o == 0.0 {
        return false;
    }
    incircle(&pa, &pb, &pc, &pp) * o.signum() > 0.0
}
