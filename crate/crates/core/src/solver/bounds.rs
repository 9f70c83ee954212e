//! Admissible radius intervals.
//!
//! The upper limit at a point is the smallest height of the triangles
//! (tetrahedra) around it. The lower limit keeps each circle reaching its
//! neighbors: `lo_i = max_k (L_{i,j} - r_max_j)`, floored at zero. Upper limits
//! depend on geometry alone, so all of them are computed before any lower
//! limit.

use crate::delaunay::{NeighborMap2, NeighborMap3};
use crate::error::{Error, Result};
use crate::geometry::{distance2, neighbor_height2, neighbor_height3, tetra_height, Point2, Point3};

/// Open interval `lo < r < hi` for one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBounds {
    pub lo: f64,
    pub hi: f64,
    /// Neighbor that determines `lo`, if `lo > 0`.
    pub blocking: Option<usize>,
}

impl RadiusBounds {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, r: f64) -> bool {
        self.lo < r && r < self.hi
    }

    /// Point at fraction `t` of the way from `lo` to `hi`.
    pub fn at(&self, t: f64) -> f64 {
        self.lo + t * (self.hi - self.lo)
    }
}

/// `r_max` at `i` in the plane: minimum height over the triangles of its ring.
pub fn max_radius2(i: usize, points: &[Point2], nm: &NeighborMap2) -> Result<f64> {
    let ring = nm.ring(i);
    if ring.triangles.is_empty() {
        return Err(Error::IsolatedPoint { point: i, needed: 2 });
    }
    ring.pairs().try_fold(f64::INFINITY, |acc, (j, k, _)| {
        Ok(acc.min(neighbor_height2(&points[i], &points[j], &points[k])?.value))
    })
}

/// `r_max` at `i` in space: minimum tetrahedron height over its star.
pub fn max_radius3(i: usize, points: &[Point3], nm: &NeighborMap3) -> Result<f64> {
    let star = nm.star(i);
    if star.is_empty() {
        return Err(Error::IsolatedPoint { point: i, needed: 3 });
    }
    star.iter().try_fold(f64::INFINITY, |acc, s| {
        let [a, b, c] = s.opposite;
        Ok(acc.min(tetra_height(&points[i], &points[a], &points[b], &points[c])?.value))
    })
}

fn finish(point: usize, lo: f64, blocking: Option<usize>, hi: f64) -> Result<RadiusBounds> {
    let (lo, blocking) = if lo > 0.0 { (lo, blocking) } else { (0.0, None) };
    if lo >= hi {
        return Err(Error::EmptyInterval {
            point,
            lo,
            hi,
            blocking,
        });
    }
    Ok(RadiusBounds { lo, hi, blocking })
}

fn lower2(i: usize, points: &[Point2], nm: &NeighborMap2, r_max: impl Fn(usize) -> Result<f64>) -> Result<(f64, Option<usize>)> {
    let mut lo = f64::NEG_INFINITY;
    let mut blocking = None;
    for &j in &nm.ring(i).neighbors {
        let v = distance2(&points[i], &points[j]) - r_max(j)?;
        if v > lo {
            lo = v;
            blocking = Some(j);
        }
    }
    Ok((lo, blocking))
}

fn lower3(i: usize, points: &[Point3], nm: &NeighborMap3, r_max: impl Fn(usize) -> Result<f64>) -> Result<(f64, Option<usize>)> {
    let mut lo = f64::NEG_INFINITY;
    let mut blocking = None;
    for star in nm.star(i) {
        let o = star.opposite;
        for l in 0..3 {
            let (j, k) = (o[l], o[(l + 1) % 3]);
            let h = neighbor_height3(&points[i], &points[j], &points[k])?.value;
            let v = h - r_max(j)?;
            if v > lo {
                lo = v;
                blocking = Some(j);
            }
        }
    }
    Ok((lo, blocking))
}

/// Radius interval of a single planar point.
pub fn radius_bounds2(i: usize, nm: &NeighborMap2, points: &[Point2]) -> Result<RadiusBounds> {
    let hi = max_radius2(i, points, nm)?;
    let (lo, blocking) = lower2(i, points, nm, |j| max_radius2(j, points, nm))?;
    finish(i, lo, blocking, hi)
}

/// Radius interval of a single spatial point.
pub fn radius_bounds3(i: usize, nm: &NeighborMap3, points: &[Point3]) -> Result<RadiusBounds> {
    let hi = max_radius3(i, points, nm)?;
    let (lo, blocking) = lower3(i, points, nm, |j| max_radius3(j, points, nm))?;
    finish(i, lo, blocking, hi)
}

/// Intervals for every planar point.
pub fn all_bounds2(points: &[Point2], nm: &NeighborMap2) -> Result<Vec<RadiusBounds>> {
    let r_max = (0..points.len())
        .map(|i| max_radius2(i, points, nm))
        .collect::<Result<Vec<_>>>()?;
    (0..points.len())
        .map(|i| {
            let (lo, blocking) = lower2(i, points, nm, |j| Ok(r_max[j]))?;
            finish(i, lo, blocking, r_max[i])
        })
        .collect()
}

/// Intervals for every spatial point.
pub fn all_bounds3(points: &[Point3], nm: &NeighborMap3) -> Result<Vec<RadiusBounds>> {
    let r_max = (0..points.len())
        .map(|i| max_radius3(i, points, nm))
        .collect::<Result<Vec<_>>>()?;
    (0..points.len())
        .map(|i| {
            let (lo, blocking) = lower3(i, points, nm, |j| Ok(r_max[j]))?;
            finish(i, lo, blocking, r_max[i])
        })
        .collect()
}
