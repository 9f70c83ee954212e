//! Checks of a finished mesh. Reports are plain data and depend only on the
//! mesh.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::planar::segment_distance2;
use super::spatial::triangle_distance3;
use super::{Mesh2, Mesh3};
use crate::geometry::{Point2, Point3};

/// Shared edges shorter than this fraction of the domain diameter carry no
/// usable direction and are skipped by the perpendicularity check.
pub const PERP_MIN_EDGE: f64 = 1e-6;
/// Containment margin, relative to the domain diameter.
pub const INSIDE_TOL: f64 = 1e-9;

/// Dimension-free access used by the validators.
pub trait ControlVolumeMesh: Sync {
    fn dim(&self) -> usize;
    fn n_cells(&self) -> usize;
    fn owner(&self, cell: usize) -> usize;
    fn n_points(&self) -> usize;
    fn point(&self, i: usize) -> Vec<f64>;
    fn vertex(&self, v: usize) -> Vec<f64>;
    fn diameter(&self) -> f64;
    /// Edges (faces) of `cell` shared with a neighbor, as vertex loops.
    fn shared(&self, cell: usize) -> Vec<(usize, Vec<usize>)>;
    /// Distinct vertices of `cell`.
    fn cell_vertices(&self, cell: usize) -> Vec<usize>;
    /// Distance from `p` to the boundary of `cell`, negated outside.
    fn depth(&self, cell: usize, p: &[f64]) -> f64;
    /// Area or volume.
    fn measure(&self, cell: usize) -> f64;
    fn domain_measure(&self) -> f64;
    /// Axis-aligned box of the domain.
    fn domain_box(&self) -> (Vec<f64>, Vec<f64>);
}

fn bbox(m: &dyn ControlVolumeMesh, cell: usize) -> (Vec<f64>, Vec<f64>) {
    let d = m.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for v in m.cell_vertices(cell) {
        for (k, x) in m.vertex(v).into_iter().enumerate() {
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    (lo, hi)
}

fn in_box(b: &(Vec<f64>, Vec<f64>), p: &[f64]) -> bool {
    p.iter().enumerate().all(|(k, x)| b.0[k] <= *x && *x <= b.1[k])
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerpViolation {
    pub cell: usize,
    pub neighbor: usize,
    /// Largest departure from a right angle over the shared edge(s), radians.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerpReport {
    pub tol: f64,
    /// Neighbor pairs examined.
    pub checked: usize,
    pub max_angle: f64,
    pub violations: Vec<PerpViolation>,
}

impl PerpReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Angle between every shared edge (face) of `i` and `j` and the line
/// `P_i P_j`, compared with a right angle.
pub fn validate_perpendicularity(mesh: &dyn ControlVolumeMesh, tol: f64) -> PerpReport {
    let min_edge = PERP_MIN_EDGE * mesh.diameter();
    let mut worst: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for c in 0..mesh.n_cells() {
        let i = mesh.owner(c);
        let pi = mesh.point(i);
        for (j, lp) in mesh.shared(c) {
            let d = sub(&mesh.point(j), &pi);
            let dn = dot(&d, &d).sqrt();
            let n = lp.len();
            let edges = if n == 2 { 1 } else { n };
            let mut angle: f64 = 0.0;
            for k in 0..edges {
                let e = sub(&mesh.vertex(lp[(k + 1) % n]), &mesh.vertex(lp[k]));
                let en = dot(&e, &e).sqrt();
                if en < min_edge {
                    continue;
                }
                angle = angle.max((dot(&e, &d).abs() / (en * dn)).min(1.0).asin());
            }
            let key = (i.min(j), i.max(j));
            let w = worst.entry(key).or_insert(0.0);
            *w = w.max(angle);
        }
    }
    let violations = worst
        .iter()
        .filter(|(_, &a)| a > tol)
        .map(|(&(cell, neighbor), &angle)| PerpViolation { cell, neighbor, angle })
        .collect();
    PerpReport {
        tol,
        checked: worst.len(),
        max_angle: worst.values().fold(0.0, |m, a| m.max(*a)),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GlobalReport {
    /// Pairs whose shared edge (face) differs between the two sides.
    pub face_mismatches: Vec<(usize, usize)>,
    /// Cell pairs with a probe point strictly inside both.
    pub overlaps: Vec<(usize, usize)>,
    pub probes: usize,
    /// Cells whose owner is not strictly inside.
    pub owners_outside: Vec<usize>,
    /// `(cell, point)`: a generator other than the owner strictly inside.
    pub foreign_points: Vec<(usize, usize)>,
}

impl GlobalReport {
    pub fn passed(&self) -> bool {
        self.face_mismatches.is_empty() && self.overlaps.is_empty() && self.owners_outside.is_empty() && self.foreign_points.is_empty()
    }
}

fn probes_of(mesh: &dyn ControlVolumeMesh, cell: usize) -> Vec<Vec<f64>> {
    let verts: Vec<Vec<f64>> = mesh.cell_vertices(cell).into_iter().map(|v| mesh.vertex(v)).collect();
    if verts.is_empty() {
        return Vec::new();
    }
    let d = mesh.dim();
    let g: Vec<f64> = (0..d).map(|k| verts.iter().map(|v| v[k]).sum::<f64>() / verts.len() as f64).collect();
    let mut out = vec![g.clone()];
    for v in &verts {
        for t in [0.5, 0.9] {
            out.push((0..d).map(|k| g[k] + t * (v[k] - g[k])).collect());
        }
    }
    out
}

/// Shared-face agreement, interior disjointness, owner containment and
/// single-generator checks.
pub fn validate_global(mesh: &dyn ControlVolumeMesh) -> GlobalReport {
    let n = mesh.n_cells();
    let tol = INSIDE_TOL * mesh.diameter();
    let mut report = GlobalReport::default();

    let mut sides: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    for c in 0..n {
        let i = mesh.owner(c);
        for (j, mut lp) in mesh.shared(c) {
            lp.sort_unstable();
            sides.entry((i, j)).or_default().push(lp);
        }
    }
    for list in sides.values_mut() {
        list.sort();
    }
    for (&(i, j), list) in &sides {
        if i < j && sides.get(&(j, i)) != Some(list) {
            report.face_mismatches.push((i, j));
        }
        if i > j && !sides.contains_key(&(j, i)) {
            report.face_mismatches.push((j, i));
        }
    }
    report.face_mismatches.sort_unstable();
    report.face_mismatches.dedup();

    let boxes: Vec<_> = (0..n).map(|c| bbox(mesh, c)).collect();
    let per_cell: Vec<(usize, Vec<(usize, usize)>, bool, Vec<(usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|c| {
            let probes = probes_of(mesh, c);
            let mut overlaps = Vec::new();
            for p in &probes {
                if mesh.depth(c, p) <= tol {
                    continue;
                }
                for other in 0..n {
                    if other != c && in_box(&boxes[other], p) && mesh.depth(other, p) > tol {
                        overlaps.push((c.min(other), c.max(other)));
                    }
                }
            }
            let owner = mesh.owner(c);
            let inside = mesh.depth(c, &mesh.point(owner)) > tol;
            let foreign = (0..mesh.n_points())
                .filter(|&k| k != owner)
                .filter(|&k| {
                    let p = mesh.point(k);
                    in_box(&boxes[c], &p) && mesh.depth(c, &p) > tol
                })
                .map(|k| (c, k))
                .collect();
            (probes.len(), overlaps, inside, foreign)
        })
        .collect();
    for (c, (probes, overlaps, inside, foreign)) in per_cell.into_iter().enumerate() {
        report.probes += probes;
        report.overlaps.extend(overlaps);
        if !inside {
            report.owners_outside.push(mesh.owner(c));
        }
        report.foreign_points.extend(foreign);
    }
    report.overlaps.sort_unstable();
    report.overlaps.dedup();
    report
}

/// Random probes over the domain box. Returns the number of probes that fell
/// strictly inside at least one cell, and every pair of cells that shared one.
pub fn probe_overlaps(mesh: &dyn ControlVolumeMesh, probes: usize, seed: u64) -> (usize, Vec<(usize, usize)>) {
    let tol = INSIDE_TOL * mesh.diameter();
    let (lo, hi) = mesh.domain_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..probes)
        .map(|_| lo.iter().zip(&hi).map(|(a, b)| a + rng.random::<f64>() * (b - a)).collect())
        .collect();
    let boxes: Vec<_> = (0..mesh.n_cells()).map(|c| bbox(mesh, c)).collect();
    let hits: Vec<Vec<usize>> = points
        .par_iter()
        .map(|p| {
            (0..mesh.n_cells())
                .filter(|&c| in_box(&boxes[c], p) && mesh.depth(c, p) > tol)
                .collect()
        })
        .collect();
    let covered = hits.iter().filter(|h| !h.is_empty()).count();
    let mut pairs: Vec<(usize, usize)> = hits
        .iter()
        .flat_map(|h| h.iter().enumerate().flat_map(move |(a, &x)| h[a + 1..].iter().map(move |&y| (x, y))))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    (covered, pairs)
}

fn winding2(poly: &[Point2], p: &Point2) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (a, b) = (poly[k] - p, poly[(k + 1) % n] - p);
            a.perp(&b).atan2(a.dot(&b))
        })
        .sum::<f64>()
        / (2.0 * PI)
}

impl ControlVolumeMesh for Mesh2 {
    fn dim(&self) -> usize {
        2
    }
    fn n_cells(&self) -> usize {
        self.cells.len()
    }
    fn owner(&self, cell: usize) -> usize {
        self.cells[cell].owner
    }
    fn n_points(&self) -> usize {
        self.points.len()
    }
    fn point(&self, i: usize) -> Vec<f64> {
        vec![self.points[i].x, self.points[i].y]
    }
    fn vertex(&self, v: usize) -> Vec<f64> {
        vec![self.vertices[v].x, self.vertices[v].y]
    }
    fn diameter(&self) -> f64 {
        self.domain.diameter()
    }
    fn shared(&self, cell: usize) -> Vec<(usize, Vec<usize>)> {
        let c = &self.cells[cell];
        let m = c.vertices.len();
        (0..m)
            .filter_map(|k| c.neighbors[k].map(|j| (j, vec![c.vertices[k], c.vertices[(k + 1) % m]])))
            .collect()
    }
    fn cell_vertices(&self, cell: usize) -> Vec<usize> {
        let mut v = self.cells[cell].vertices.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
    fn depth(&self, cell: usize, p: &[f64]) -> f64 {
        let poly = self.polygon(cell);
        if poly.len() < 3 {
            return f64::NEG_INFINITY;
        }
        let q = Point2::new(p[0], p[1]);
        let n = poly.len();
        let dist = (0..n).map(|k| segment_distance2(&q, &poly[k], &poly[(k + 1) % n])).fold(f64::INFINITY, f64::min);
        if winding2(&poly, &q).abs() >= 0.5 {
            dist
        } else {
            -dist
        }
    }
    fn measure(&self, cell: usize) -> f64 {
        self.area(cell)
    }
    fn domain_measure(&self) -> f64 {
        self.domain.area()
    }
    fn domain_box(&self) -> (Vec<f64>, Vec<f64>) {
        let v = &self.domain.vertices;
        let lo = vec![v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), v.iter().map(|p| p.y).fold(f64::INFINITY, f64::min)];
        let hi = vec![v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max), v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max)];
        (lo, hi)
    }
}

/// Signed solid angle of triangle `abc` seen from the origin.
fn solid_angle(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let num = a.dot(&b.cross(c));
    let den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    2.0 * num.atan2(den)
}

impl ControlVolumeMesh for Mesh3 {
    fn dim(&self) -> usize {
        3
    }
    fn n_cells(&self) -> usize {
        self.cells.len()
    }
    fn owner(&self, cell: usize) -> usize {
        self.cells[cell].owner
    }
    fn n_points(&self) -> usize {
        self.points.len()
    }
    fn point(&self, i: usize) -> Vec<f64> {
        self.points[i].coords.iter().copied().collect()
    }
    fn vertex(&self, v: usize) -> Vec<f64> {
        self.vertices[v].coords.iter().copied().collect()
    }
    fn diameter(&self) -> f64 {
        self.domain.diameter()
    }
    fn shared(&self, cell: usize) -> Vec<(usize, Vec<usize>)> {
        self.cells[cell]
            .faces
            .iter()
            .filter_map(|f| f.neighbor.map(|j| (j, f.vertices.clone())))
            .collect()
    }
    fn cell_vertices(&self, cell: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells[cell].faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
    fn depth(&self, cell: usize, p: &[f64]) -> f64 {
        let q = Point3::new(p[0], p[1], p[2]);
        let mut omega = 0.0;
        let mut dist = f64::INFINITY;
        let faces = &self.cells[cell].faces;
        if faces.is_empty() {
            return f64::NEG_INFINITY;
        }
        for f in faces {
            let pts = self.face_points(f);
            for k in 1..pts.len() - 1 {
                let (a, b, c) = (pts[0], pts[k], pts[k + 1]);
                omega += solid_angle(&(a - q), &(b - q), &(c - q));
                dist = dist.min(triangle_distance3(&q, &a, &b, &c));
            }
        }
        if (omega / (4.0 * PI)).abs() >= 0.5 {
            dist
        } else {
            -dist
        }
    }
    fn measure(&self, cell: usize) -> f64 {
        self.volume(cell)
    }
    fn domain_measure(&self) -> f64 {
        self.domain.volume()
    }
    fn domain_box(&self) -> (Vec<f64>, Vec<f64>) {
        let pts: Vec<&Point3> = self.domain.faces().iter().flatten().collect();
        let lo = (0..3).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
        let hi = (0..3).map(|k| pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
        (lo, hi)
    }
}
