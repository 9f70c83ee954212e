use std::collections::HashMap;

use nalgebra::Vector2;
use rayon::prelude::*;

use super::clip::{clip_polygon, Plane};
use super::pool::VertexPool;
use super::{check_orphans, dedup_loop, BuildOptions, Cell2, Domain2, Mesh2, DEFAULT_INFLATE, FAR_FACTOR, MERGE_TOL};
use crate::complex::{Complex, PlanarComplex};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::solver::vertex::vertex2;

pub(crate) fn segment_distance2(p: &Point2, a: &Point2, b: &Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

type Loop = Vec<(Point2, Option<usize>)>;

/// Polygons of the cells of every point, hull cells closed far away.
/// The flag is false if a far edge comes near the domain.
fn raw_cells(complex: &PlanarComplex, q: &[Point2], hull: &HashMap<(usize, usize), (usize, Vector2<f64>)>, far: f64, ball: (Point2, f64)) -> (Vec<Loop>, bool) {
    let mut ok = true;
    let cells = (0..complex.n_points())
        .map(|i| {
            let ring = complex.nm.ring(i);
            let m = ring.len();
            let mut poly: Loop = Vec::with_capacity(m + 3);
            if ring.closed {
                for k in 0..m {
                    poly.push((q[ring.triangles[k]], Some(ring.neighbors[k])));
                }
                return poly;
            }
            let (first, last) = (ring.neighbors[0], ring.neighbors[m - 1]);
            let (t0, n0) = hull[&sorted(i, first)];
            let (t1, n1) = hull[&sorted(i, last)];
            let f0 = q[t0] + n0 * far;
            let f1 = q[t1] + n1 * far;
            let mid = Point2::from((q[t0].coords + q[t1].coords) * 0.5) + (n0 + n1).normalize() * far;
            poly.push((f0, None));
            for k in 0..m - 1 {
                poly.push((q[ring.triangles[k]], Some(ring.neighbors[k])));
            }
            poly.push((f1, Some(last)));
            poly.push((mid, None));
            ok &= segment_distance2(&ball.0, &f1, &mid) > ball.1 && segment_distance2(&ball.0, &mid, &f0) > ball.1;
            poly
        })
        .collect();
    (cells, ok)
}

fn convex(poly: &[Point2], diam: f64) -> bool {
    let n = poly.len();
    if n < 3 || super::clip::polygon_area(poly) <= 0.0 {
        return false;
    }
    (0..n).all(|k| {
        let e1 = poly[(k + 1) % n] - poly[k];
        let e2 = poly[(k + 2) % n] - poly[(k + 1) % n];
        let (l1, l2) = (e1.norm(), e2.norm());
        e1.perp(&e2) >= -(1e-9 * l1 * l2 + 1e-12 * diam * (l1 + l2))
    })
}

/// Cells of a planar point set for the given radii.
pub fn build_volumes2(complex: &PlanarComplex, radii: &[f64], opts: &BuildOptions<Domain2>) -> Result<Mesh2> {
    let pts = &complex.points;
    let n = pts.len();
    if radii.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: radii.len() });
    }
    let q = (0..complex.n_simplices())
        .map(|t| vertex2(complex.corners(t), complex.radii_of(t, radii)).map(|v| v.position))
        .collect::<Result<Vec<_>>>()?;
    check_orphans(q.len(), (0..n).flat_map(|i| complex.nm.ring(i).triangles.iter().copied()), 3)?;

    let domain = match &opts.domain {
        Some(d) => d.clone(),
        None => Domain2::around(pts, DEFAULT_INFLATE)?,
    };
    if let Some(i) = (0..n).find(|&i| !domain.contains(&pts[i])) {
        return Err(Error::InvalidConfig(format!("point {i} is not inside the clipping domain")));
    }
    let ball = domain.ball();
    let diam = domain.diameter();

    let mut hull = HashMap::new();
    for (t, k) in complex.tri.hull_facets() {
        let s = complex.tri.simplices[t];
        let (a, b) = (s[(k + 1) % 3], s[(k + 2) % 3]);
        let e = pts[b] - pts[a];
        hull.insert(sorted(a, b), (t, Vector2::new(e.y, -e.x).normalize()));
    }

    let reach = q.iter().map(|p| (p - ball.0).norm()).fold(0.0, f64::max);
    let mut far = FAR_FACTOR * diam + reach;
    let raw = loop {
        let (cells, ok) = raw_cells(complex, &q, &hull, far, ball);
        if ok {
            break cells;
        }
        far *= 10.0;
        if !far.is_finite() {
            return Err(Error::InvalidConfig("hull cells cannot be closed outside the domain".into()));
        }
    };

    let planes: Vec<Plane<2>> = domain.planes();
    let clipped: Vec<Loop> = raw
        .into_par_iter()
        .map(|poly| planes.iter().fold(poly, |acc, pl| clip_polygon(&acc, pl, None)))
        .collect();

    let mut pool = VertexPool::<2>::new(MERGE_TOL * diam);
    let mut cells = Vec::with_capacity(n);
    for (owner, poly) in clipped.into_iter().enumerate() {
        let ids: Vec<(usize, Option<usize>)> = poly.into_iter().map(|(p, l)| (pool.insert(p), l)).collect();
        let ids = dedup_loop(&ids);
        let m = ids.len();
        cells.push(Cell2 {
            owner,
            vertices: ids.iter().map(|v| v.0).collect(),
            neighbors: (0..m).map(|k| ids[(k + 1) % m].1).collect(),
            closed: true,
        });
    }

    let mut mesh = Mesh2 {
        points: pts.clone(),
        vertices: pool.points,
        cells,
        domain,
        candidates: q,
        diagnostics: Vec::new(),
    };
    mesh.diagnostics = (0..n)
        .filter(|&i| !convex(&mesh.polygon(i), diam))
        .map(|point| Error::NonConvexCell { point })
        .collect();
    if opts.strict {
        if let Some(e) = mesh.diagnostics.first() {
            return Err(e.clone());
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::clip::polygon_area;
    use approx::assert_relative_eq;

    fn complex(c: &[[f64; 2]]) -> PlanarComplex {
        PlanarComplex::new(c.iter().map(|p| Point2::new(p[0], p[1])).collect()).unwrap()
    }

    #[test]
    fn square_with_center_gives_a_diamond() {
        let c = complex(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]);
        let opts = BuildOptions {
            domain: Some(Domain2::rectangle(Point2::new(-0.1, -0.1), Point2::new(1.1, 1.1)).unwrap()),
            strict: true,
        };
        let mesh = build_volumes2(&c, &[0.3; 5], &opts).unwrap();
        let center = mesh.polygon(4);
        assert_eq!(center.len(), 4);
        assert_relative_eq!(polygon_area(&center), 0.5, max_relative = 1e-12);
        for v in &center {
            assert_relative_eq!((v.x - 0.5).abs() + (v.y - 0.5).abs(), 0.5, max_relative = 1e-12);
        }
        assert_eq!(mesh.cells[4].neighbors.iter().filter(|n| n.is_some()).count(), 4);
        let total: f64 = (0..5).map(|i| mesh.area(i)).sum();
        assert_relative_eq!(total, 1.2 * 1.2, max_relative = 1e-12);
    }

    #[test]
    fn single_triangle_cells_share_one_interior_vertex() {
        let c = complex(&[[0.0, 0.0], [1.0, 0.0], [0.45, 0.8]]);
        let mesh = build_volumes2(&c, &[0.5, 0.5, 0.5], &BuildOptions::default()).unwrap();
        let q = mesh.candidates[0];
        for i in 0..3 {
            let poly = mesh.polygon(i);
            let interior: Vec<_> = poly
                .iter()
                .filter(|v| mesh.domain.planes().iter().all(|pl| pl.signed(v) < -1e-9))
                .collect();
            assert_eq!(interior.len(), 1);
            assert_eq!(*interior[0], q);
        }
        let total: f64 = (0..3).map(|i| mesh.area(i)).sum();
        assert_relative_eq!(total, mesh.domain.area(), max_relative = 1e-12);
    }

    #[test]
    fn radius_length_is_checked() {
        let c = complex(&[[0.0, 0.0], [1.0, 0.0], [0.45, 0.8]]);
        assert!(matches!(build_volumes2(&c, &[0.5], &BuildOptions::default()), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn point_outside_domain_is_rejected() {
        let c = complex(&[[0.0, 0.0], [1.0, 0.0], [0.45, 0.8]]);
        let opts = BuildOptions {
            domain: Some(Domain2::rectangle(Point2::new(0.1, 0.1), Point2::new(1.0, 1.0)).unwrap()),
            strict: true,
        };
        assert!(matches!(build_volumes2(&c, &[0.5; 3], &opts), Err(Error::InvalidConfig(_))));
    }
}
