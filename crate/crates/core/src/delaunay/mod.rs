//! Delaunay triangulation in the plane and tetrahedralization in space, plus
//! the per-point neighborhood indexing used by the radius solver and the mesh
//! builder.

mod bowyer_watson;
mod neighbors;

pub use neighbors::{NeighborMap2, NeighborMap3, Ring, Star};

use bowyer_watson::{Engine, Kernel};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3, EPS_LEN};
use crate::predicates::{in_coplanar_circle, incircle, insphere, orient2, orient3};

/// A simplicial decomposition with `K` vertices per simplex.
///
/// `neighbors[s][i]` is the simplex across the facet opposite vertex `i` of
/// `simplices[s]`, or `None` on the convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation<const K: usize> {
    pub simplices: Vec<[usize; K]>,
    pub neighbors: Vec<[Option<usize>; K]>,
}

/// Counter-clockwise triangles.
pub type Triangulation2 = Triangulation<3>;
/// Positively oriented tetrahedra.
pub type Triangulation3 = Triangulation<4>;

impl<const K: usize> Triangulation<K> {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Hull facets as `(simplex, local index of the opposite vertex)`.
    pub fn hull_facets(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(s, row)| (0..K).filter(move |&i| row[i].is_none()).map(move |i| (s, i)))
    }
}

struct Planar<'a>(&'a [Point2]);

impl Kernel<3> for Planar<'_> {
    fn orient(&self, s: &[usize; 3]) -> f64 {
        orient2(&self.0[s[0]], &self.0[s[1]], &self.0[s[2]])
    }

    fn in_sphere(&self, s: &[usize; 3], p: usize) -> f64 {
        incircle(&self.0[s[0]], &self.0[s[1]], &self.0[s[2]], &self.0[p])
    }

    fn in_facet_ball(&self, face: &[usize], p: usize) -> bool {
        let (a, b, q) = (&self.0[face[0]], &self.0[face[1]], &self.0[p]);
        (q - a).dot(&(b - a)) > 0.0 && (q - b).dot(&(a - b)) > 0.0
    }
}

struct Spatial<'a>(&'a [Point3]);

impl Kernel<4> for Spatial<'_> {
    fn orient(&self, s: &[usize; 4]) -> f64 {
        let p = self.0;
        orient3(&p[s[0]], &p[s[1]], &p[s[2]], &p[s[3]])
    }

    fn in_sphere(&self, s: &[usize; 4], q: usize) -> f64 {
        let p = self.0;
        insphere(&p[s[0]], &p[s[1]], &p[s[2]], &p[s[3]], &p[q])
    }

    fn in_facet_ball(&self, face: &[usize], q: usize) -> bool {
        let p = self.0;
        in_coplanar_circle(&p[face[0]], &p[face[1]], &p[face[2]], &p[q])
    }
}

/// Report the first pair of points closer than the relative length tolerance.
fn find_duplicates<const D: usize>(points: &[[f64; D]]) -> Result<()> {
    let mut scale: f64 = 0.0;
    for d in 0..D {
        let lo = points.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        scale = scale.max(hi - lo).max(lo.abs()).max(hi.abs());
    }
    let tol = EPS_LEN * scale.max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    let mut worst: Option<(usize, usize)> = None;
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b][0] - points[a][0] > tol {
                break;
            }
            let d2: f64 = (0..D).map(|d| (points[a][d] - points[b][d]).powi(2)).sum();
            if d2.sqrt() <= tol {
                let pair = (a.min(b), a.max(b));
                if worst.is_none_or(|w| pair < w) {
                    worst = Some(pair);
                }
            }
        }
    }
    match worst {
        Some((first, second)) => Err(Error::DuplicatePoints { first, second }),
        None => Ok(()),
    }
}

fn check_finite<const D: usize>(points: &[[f64; D]]) -> Result<()> {
    if points.iter().flatten().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidConfig("non-finite coordinate".into()))
    }
}

/// Delaunay triangulation of a planar point set by incremental insertion in
/// input order.
///
/// Cocircular ties are resolved by keeping the existing triangles: a point
/// exactly on a circumcircle is treated as outside it.
pub fn triangulate2(points: &[Point2]) -> Result<Triangulation2> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let raw: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    check_finite(&raw)?;
    find_duplicates(&raw)?;
    let kernel = Planar(points);
    let third = (2..points.len())
        .find(|&k| orient2(&points[0], &points[1], &points[k]) != 0.0)
        .ok_or(Error::AllCollinear)?;
    let first = if orient2(&points[0], &points[1], &points[third]) > 0.0 {
        [0, 1, third]
    } else {
        [1, 0, third]
    };
    let mut engine = Engine::new(&kernel, first);
    for p in (2..points.len()).filter(|&p| p != third) {
        engine.insert(p);
    }
    let (simplices, neighbors) = engine.finish();
    Ok(Triangulation {
        simplices,
        neighbors,
    })
}

/// Delaunay tetrahedralization of a spatial point set by incremental insertion
/// in input order. Cospherical ties keep the existing tetrahedra.
pub fn tetrahedralize3(points: &[Point3]) -> Result<Triangulation3> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    let raw: Vec<[f64; 3]> = points.iter().map(|p| [p.x, p.y, p.z]).collect();
    check_finite(&raw)?;
    find_duplicates(&raw)?;
    let kernel = Spatial(points);
    let n = points.len();
    let third = (2..n)
        .find(|&k| (points[1] - points[0]).cross(&(points[k] - points[0])).norm_squared() > 0.0)
        .ok_or(Error::AllCoplanar)?;
    let fourth = (2..n)
        .filter(|&k| k != third)
        .find(|&k| orient3(&points[0], &points[1], &points[third], &points[k]) != 0.0)
        .ok_or(Error::AllCoplanar)?;
    let first = if orient3(&points[0], &points[1], &points[third], &points[fourth]) > 0.0 {
        [0, 1, third, fourth]
    } else {
        [1, 0, third, fourth]
    };
    let mut engine = Engine::new(&kernel, first);
    for p in (2..n).filter(|&p| p != third && p != fourth) {
        engine.insert(p);
    }
    let (simplices, neighbors) = engine.finish();
    Ok(Triangulation {
        simplices,
        neighbors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn minimal_inputs() {
        let tri = triangulate2(&[p2(0.0, 0.0), p2(1.0, 0.0), p2(0.0, 1.0)]).unwrap();
        assert_eq!(tri.len(), 1);
        assert_eq!(tri.neighbors[0], [None; 3]);

        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let tet = tetrahedralize3(&pts).unwrap();
        assert_eq!(tet.len(), 1);
        assert_eq!(tet.hull_facets().count(), 4);
    }

    #[test]
    fn unit_square_uses_the_first_diagonal() {
        let pts = [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)];
        let tri = triangulate2(&pts).unwrap();
        assert_eq!(tri.len(), 2);
        // The four corners are cocircular; the tie keeps the 0-2 diagonal
        // created by the first triangle.
        for t in &tri.simplices {
            assert!(t.contains(&0) && t.contains(&2));
        }
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert_eq!(
            triangulate2(&[p2(0.0, 0.0), p2(1.0, 1.0)]),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        );
        assert_eq!(
            triangulate2(&[p2(0.0, 0.0), p2(1.0, 1.0), p2(2.0, 2.0), p2(-3.0, -3.0)]),
            Err(Error::AllCollinear)
        );
        assert_eq!(
            triangulate2(&[p2(0.0, 0.0), p2(1.0, 0.0), p2(0.5, 1.0), p2(1.0, 0.0)]),
            Err(Error::DuplicatePoints { first: 1, second: 3 })
        );
        let flat: Vec<Point3> = (0..6).map(|k| Point3::new(k as f64, (k * k) as f64, 0.0)).collect();
        assert_eq!(tetrahedralize3(&flat), Err(Error::AllCoplanar));
        let mut dup = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        dup.push(dup[2]);
        assert_eq!(
            tetrahedralize3(&dup),
            Err(Error::DuplicatePoints { first: 2, second: 4 })
        );
    }

    #[test]
    fn collinear_prefix_is_skipped() {
        let pts = [p2(0.0, 0.0), p2(1.0, 0.0), p2(2.0, 0.0), p2(3.0, 0.0), p2(1.5, 1.0)];
        let tri = triangulate2(&pts).unwrap();
        assert_eq!(tri.len(), 3);
    }
}
