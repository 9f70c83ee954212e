use std::collections::{BTreeMap, HashMap};

use nalgebra::Vector3;
use rayon::prelude::*;

use super::clip::{clip_polyhedron_all, Face3, Plane};
use super::pool::VertexPool;
use super::{check_orphans, dedup_loop, BuildOptions, Cell3, Domain3, Face, Mesh3, DEFAULT_INFLATE, EPS_FACE, FAR_FACTOR, MERGE_TOL};
use crate::complex::{Complex, SpatialComplex};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::solver::vertex::vertex3;

/// Distance from `p` to the closed triangle `abc`.
pub(crate) fn triangle_distance3(p: &Point3, a: &Point3, b: &Point3, c: &Point3) -> f64 {
    let (ab, ac, ap) = (b - a, c - a, p - a);
    let (d1, d2) = (ab.dot(&ap), ac.dot(&ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm();
    }
    let bp = p - b;
    let (d3, d4) = (ab.dot(&bp), ac.dot(&bp));
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return (p - (a + ab * t)).norm();
    }
    let cp = p - c;
    let (d5, d6) = (ab.dot(&cp), ac.dot(&cp));
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return (p - (a + ac * t)).norm();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * t)).norm();
    }
    let denom = 1.0 / (va + vb + vc);
    let (v, w) = (vb * denom, vc * denom);
    (p - (a + ab * v + ac * w)).norm()
}

/// Area-weighted normal (twice the vector area) of a closed loop.
pub(crate) fn newell_normal(pts: &[Point3]) -> Vector3<f64> {
    let n = pts.len();
    let mut acc = Vector3::zeros();
    if n == 0 {
        return acc;
    }
    for k in 1..n.saturating_sub(1) {
        acc += (pts[k] - pts[0]).cross(&(pts[k + 1] - pts[0]));
    }
    acc
}

pub(crate) fn centroid(pts: &[Point3]) -> Point3 {
    Point3::from(pts.iter().map(|p| p.coords).sum::<Vector3<f64>>() / pts.len().max(1) as f64)
}

struct Hull {
    /// Facet id by sorted corner triple.
    ids: HashMap<[usize; 3], usize>,
    /// Owning tetrahedron and outward unit normal per facet.
    facets: Vec<(usize, Vector3<f64>)>,
}

impl Hull {
    fn new(complex: &SpatialComplex) -> Self {
        let pts = &complex.points;
        let mut ids = HashMap::new();
        let mut facets = Vec::new();
        for (t, k) in complex.tet.hull_facets() {
            let s = complex.tet.simplices[t];
            let o: Vec<usize> = (0..4).filter(|&j| j != k).map(|j| s[j]).collect();
            let mut n = (pts[o[1]] - pts[o[0]]).cross(&(pts[o[2]] - pts[o[0]]));
            if n.dot(&(pts[s[k]] - pts[o[0]])) > 0.0 {
                n = -n;
            }
            let mut key = [o[0], o[1], o[2]];
            key.sort_unstable();
            ids.insert(key, facets.len());
            facets.push((t, n.normalize()));
        }
        Hull { ids, facets }
    }

    fn facet(&self, a: usize, b: usize, c: usize) -> usize {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.ids[&key]
    }
}

fn local(complex: &SpatialComplex, t: usize, v: usize) -> usize {
    complex.tet.simplices[t].iter().position(|&x| x == v).expect("vertex of tetrahedron")
}

fn fourth(complex: &SpatialComplex, t: usize, known: [usize; 3]) -> usize {
    *complex.tet.simplices[t].iter().find(|v| !known.contains(v)).expect("four distinct vertices")
}

/// Tetrahedra around edge `(i, j)` in right-handed order about `i -> j`, as
/// `(tet, k, l)` with `(i, j, k, l)` positively oriented. The bool is true for
/// a closed cycle.
fn edge_cycle(complex: &SpatialComplex, i: usize, j: usize) -> (Vec<(usize, usize, usize)>, bool) {
    let star = complex.nm.star(i);
    let s = star.iter().filter(|s| s.opposite.contains(&j)).min_by_key(|s| s.tet).expect("edge in star");
    let a = s.opposite.iter().position(|&v| v == j).unwrap();
    let start = (s.tet, s.opposite[(a + 1) % 3], s.opposite[(a + 2) % 3]);
    let nbr = |t: usize, v: usize| complex.tet.neighbors[t][local(complex, t, v)];

    let mut at = start;
    let mut closed = false;
    for _ in 0..star.len() {
        let (t, k, l) = at;
        match nbr(t, l) {
            None => break,
            Some(p) if p == start.0 => {
                closed = true;
                break;
            }
            Some(p) => {
                let m = fourth(complex, p, [i, j, k]);
                at = (p, m, k);
            }
        }
    }
    let first = if closed { start } else { at };
    let mut out = vec![first];
    loop {
        let (t, k, l) = *out.last().unwrap();
        match nbr(t, k) {
            Some(p) if p != first.0 => {
                let m = fourth(complex, p, [i, j, l]);
                out.push((p, l, m));
            }
            _ => break,
        }
    }
    (out, closed)
}

type Surface = Vec<Face3<Option<usize>>>;

/// Closed surface of every cell, hull cells capped far away. The flag is
/// false if a cap comes near the domain.
fn raw_cells(complex: &SpatialComplex, q: &[Point3], hull: &Hull, far: f64, ball: (Point3, f64)) -> (Vec<Surface>, bool) {
    let far_pts: Vec<Point3> = hull.facets.iter().map(|&(t, n)| q[t] + n * far).collect();
    let results: Vec<(Surface, bool)> = (0..complex.n_points())
        .into_par_iter()
        .map(|i| {
            let mut faces: Surface = Vec::new();
            let mut cap: BTreeMap<usize, usize> = BTreeMap::new();
            for j in complex.nm.neighbors(i) {
                let (cycle, closed) = edge_cycle(complex, i, j);
                let mut loop_pts: Vec<Point3> = cycle.iter().map(|&(t, _, _)| q[t]).collect();
                if !closed {
                    let (_, k0, _) = cycle[0];
                    let (_, _, l1) = *cycle.last().unwrap();
                    let fs = hull.facet(i, j, k0);
                    let fe = hull.facet(i, j, l1);
                    loop_pts.insert(0, far_pts[fs]);
                    loop_pts.push(far_pts[fe]);
                    cap.insert(fs, fe);
                }
                faces.push((loop_pts, Some(j)));
            }
            let mut ok = true;
            if let Some((&first, _)) = cap.iter().next() {
                let mut ring = vec![first];
                let mut at = cap[&first];
                while at != first && ring.len() <= cap.len() {
                    ring.push(at);
                    at = cap[&at];
                }
                let normal: Vector3<f64> = ring.iter().map(|&f| hull.facets[f].1).sum();
                let base = centroid(&ring.iter().map(|&f| far_pts[f]).collect::<Vec<_>>());
                let apex = base + normal.normalize() * far;
                for k in 0..ring.len() {
                    let (a, b) = (far_pts[ring[k]], far_pts[ring[(k + 1) % ring.len()]]);
                    ok &= triangle_distance3(&ball.0, &apex, &a, &b) > ball.1;
                    faces.push((vec![apex, a, b], None));
                }
            }
            (faces, ok)
        })
        .collect();
    let ok = results.iter().all(|r| r.1);
    (results.into_iter().map(|r| r.0).collect(), ok)
}

/// Largest distance of a loop's points from its mean plane.
pub(crate) fn warp(pts: &[Point3]) -> f64 {
    let n = newell_normal(pts);
    let len = n.norm();
    if len == 0.0 {
        return 0.0;
    }
    let (u, c) = (n / len, centroid(pts));
    pts.iter().map(|p| u.dot(&(p - c)).abs()).fold(0.0, f64::max)
}

fn convex(mesh: &Mesh3, cell: usize, diam: f64) -> bool {
    let c = &mesh.cells[cell];
    if c.faces.len() < 4 || mesh.volume(cell) <= 0.0 {
        return false;
    }
    let verts: Vec<Point3> = c.faces.iter().flat_map(|f| f.vertices.iter().map(|&v| mesh.vertices[v])).collect();
    c.faces.iter().all(|f| {
        let pts = mesh.face_points(f);
        let n = newell_normal(&pts);
        if n.norm() < 1e-12 * diam * diam {
            return true;
        }
        let (u, o) = (n.normalize(), centroid(&pts));
        verts.iter().all(|v| u.dot(&(v - o)) <= 1e-9 * diam)
    })
}

/// Cells of a spatial point set for the given radii.
pub fn build_volumes3(complex: &SpatialComplex, radii: &[f64], opts: &BuildOptions<Domain3>) -> Result<Mesh3> {
    let pts = &complex.points;
    let n = pts.len();
    if radii.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: radii.len() });
    }
    let q = (0..complex.n_simplices())
        .map(|t| vertex3(complex.corners(t), complex.radii_of(t, radii)).map(|v| v.position))
        .collect::<Result<Vec<_>>>()?;
    check_orphans(q.len(), (0..n).flat_map(|i| complex.nm.star(i).iter().map(|s| s.tet)), 4)?;

    let domain = match &opts.domain {
        Some(d) => d.clone(),
        None => Domain3::around(pts, DEFAULT_INFLATE)?,
    };
    if let Some(i) = (0..n).find(|&i| !domain.contains(&pts[i])) {
        return Err(Error::InvalidConfig(format!("point {i} is not inside the clipping domain")));
    }
    let ball = domain.ball();
    let diam = domain.diameter();
    let hull = Hull::new(complex);

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

    let planes: Vec<Plane<3>> = domain.planes();
    let clipped: Vec<Option<Surface>> = raw.into_par_iter().map(|s| clip_polyhedron_all(s, &planes, None)).collect();

    let mut pool = VertexPool::<3>::new(MERGE_TOL * diam);
    let mut cells = Vec::with_capacity(n);
    let mut diagnostics = Vec::new();
    for (owner, surface) in clipped.into_iter().enumerate() {
        let Some(surface) = surface else {
            diagnostics.push(Error::NonConvexCell { point: owner });
            cells.push(Cell3 {
                owner,
                faces: Vec::new(),
                closed: false,
            });
            continue;
        };
        let faces = surface
            .into_iter()
            .filter_map(|(loop_pts, neighbor)| {
                let ids: Vec<(usize, ())> = loop_pts.into_iter().map(|p| (pool.insert(p), ())).collect();
                let ids = dedup_loop(&ids);
                (ids.len() >= 3).then(|| Face {
                    vertices: ids.into_iter().map(|v| v.0).collect(),
                    neighbor,
                })
            })
            .collect();
        cells.push(Cell3 { owner, faces, closed: true });
    }

    let mut mesh = Mesh3 {
        points: pts.clone(),
        vertices: pool.points,
        cells,
        domain,
        candidates: q,
        diagnostics: Vec::new(),
    };
    for cell in &mesh.cells {
        let i = cell.owner;
        for f in &cell.faces {
            if let Some(j) = f.neighbor {
                let deviation = warp(&mesh.face_points(f));
                if deviation > EPS_FACE * (pts[i] - pts[j]).norm() {
                    diagnostics.push(Error::NonPlanarFace { point: i, neighbor: j, deviation });
                }
            }
        }
    }
    for i in 0..n {
        if mesh.cells[i].closed && !convex(&mesh, i, diam) {
            diagnostics.push(Error::NonConvexCell { point: i });
        }
    }
    mesh.diagnostics = diagnostics;
    if opts.strict {
        if let Some(e) = mesh.diagnostics.first() {
            return Err(e.clone());
        }
    }
    Ok(mesh)
}
