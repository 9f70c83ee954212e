//! Half-space clipping of polygons and closed polyhedral surfaces.
//!
//! Crossing points depend only on the unordered segment and the plane, so two
//! cells that share an edge compute bit-identical clip points on it.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::{Point, SVector};

use crate::geometry::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane<const D: usize> {
    pub normal: SVector<f64, D>,
    pub offset: f64,
}

impl<const D: usize> Plane<D> {
    /// `normal · x <= offset` is the kept side.
    pub fn new(normal: SVector<f64, D>, offset: f64) -> Self {
        Plane { normal, offset }
    }

    pub fn through(point: &Point<f64, D>, normal: SVector<f64, D>) -> Self {
        Plane {
            normal,
            offset: normal.dot(&point.coords),
        }
    }

    pub fn signed(&self, p: &Point<f64, D>) -> f64 {
        self.normal.dot(&p.coords) - self.offset
    }
}

fn lex_cmp<const D: usize>(a: &Point<f64, D>, b: &Point<f64, D>) -> Ordering {
    (0..D)
        .map(|d| a[d].total_cmp(&b[d]))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Where segment `ab` meets the plane.
pub fn crossing<const D: usize>(plane: &Plane<D>, a: &Point<f64, D>, b: &Point<f64, D>) -> Point<f64, D> {
    let (p, q) = if lex_cmp(b, a).is_lt() { (b, a) } else { (a, b) };
    let (sp, sq) = (plane.signed(p), plane.signed(q));
    if sp == 0.0 {
        return *p;
    }
    if sq == 0.0 {
        return *q;
    }
    let t = sp / (sp - sq);
    p + (q - p) * t
}

/// Keep the part of a closed polygon with `signed <= 0`.
///
/// Every vertex carries the label of the edge arriving at it. Edges created
/// along the plane are labelled `cut`.
pub fn clip_polygon<const D: usize, L: Copy>(poly: &[(Point<f64, D>, L)], plane: &Plane<D>, cut: L) -> Vec<(Point<f64, D>, L)> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for k in 0..n {
        let a = poly[(k + n - 1) % n].0;
        let (b, label) = poly[k];
        match (plane.signed(&a) <= 0.0, plane.signed(&b) <= 0.0) {
            (true, true) => out.push((b, label)),
            (true, false) => out.push((crossing(plane, &a, &b), label)),
            (false, true) => {
                out.push((crossing(plane, &a, &b), cut));
                out.push((b, label));
            }
            (false, false) => {}
        }
    }
    out
}

pub type Face3<L> = (Vec<Point3>, L);

fn key(p: &Point3) -> [u64; 3] {
    [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()]
}

/// Clip a closed, outward-oriented polyhedral surface to `signed <= 0` and
/// close it with cap faces on the plane, labelled `cap`.
///
/// Returns `None` if the cut edges do not chain into closed loops, which only
/// happens for surfaces that are not closed.
pub fn clip_polyhedron<L: Copy>(faces: &[Face3<L>], plane: &Plane<3>, cap: L) -> Option<Vec<Face3<L>>> {
    let mut out = Vec::with_capacity(faces.len() + 1);
    // Cap edges, already reversed so that caps face outward.
    let mut next: HashMap<[u64; 3], Vec<Point3>> = HashMap::new();
    let mut order: Vec<Point3> = Vec::new();
    for (verts, label) in faces {
        let poly: Vec<(Point3, bool)> = verts.iter().map(|p| (*p, false)).collect();
        let clipped = clip_polygon(&poly, plane, true);
        let m = clipped.len();
        for k in 0..m {
            if clipped[k].1 {
                let from = clipped[(k + m - 1) % m].0;
                let to = clipped[k].0;
                if from != to {
                    let entry = next.entry(key(&to)).or_default();
                    if entry.is_empty() {
                        order.push(to);
                    }
                    entry.push(from);
                }
            }
        }
        if m >= 3 {
            out.push((clipped.into_iter().map(|(p, _)| p).collect(), *label));
        }
    }
    for start in order {
        while let Some(first) = next.get_mut(&key(&start)).and_then(Vec::pop) {
            let mut cap_loop = vec![start, first];
            let mut at = first;
            while at != start {
                let step = next.get_mut(&key(&at)).and_then(Vec::pop)?;
                cap_loop.push(step);
                at = step;
            }
            cap_loop.pop();
            if cap_loop.len() >= 3 {
                out.push((cap_loop, cap));
            }
        }
    }
    Some(out)
}

/// Clip by several planes in turn.
pub fn clip_polyhedron_all<L: Copy>(faces: Vec<Face3<L>>, planes: &[Plane<3>], cap: L) -> Option<Vec<Face3<L>>> {
    planes.iter().try_fold(faces, |acc, p| clip_polyhedron(&acc, p, cap))
}

/// Signed area of a closed planar polygon (positive when counter-clockwise).
pub fn polygon_area(pts: &[Point<f64, 2>]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let (a, b) = (pts[k], pts[(k + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        * 0.5
}

/// Enclosed volume of an outward-oriented closed surface (faces fanned from
/// their first vertex).
pub fn polyhedron_volume(faces: &[&[Point3]]) -> f64 {
    let Some(origin) = faces.iter().find_map(|f| f.first()) else {
        return 0.0;
    };
    let mut v = 0.0;
    for f in faces {
        for k in 1..f.len().saturating_sub(1) {
            let (a, b, c) = (f[0] - origin, f[k] - origin, f[k + 1] - origin);
            v += a.dot(&b.cross(&c));
        }
    }
    v / 6.0
}

/// Outward box faces.
pub fn box_faces(lo: &Point3, hi: &Point3) -> Vec<[Point3; 4]> {
    let c = |x: bool, y: bool, z: bool| Point3::new(if x { hi.x } else { lo.x }, if y { hi.y } else { lo.y }, if z { hi.z } else { lo.z });
    vec![
        [c(false, false, false), c(false, true, false), c(true, true, false), c(true, false, false)],
        [c(false, false, true), c(true, false, true), c(true, true, true), c(false, true, true)],
        [c(false, false, false), c(true, false, false), c(true, false, true), c(false, false, true)],
        [c(false, true, false), c(false, true, true), c(true, true, true), c(true, true, false)],
        [c(false, false, false), c(false, false, true), c(false, true, true), c(false, true, false)],
        [c(true, false, false), c(true, true, false), c(true, true, true), c(true, false, true)],
    ]
}
