//! Oracles and instance generators shared by the integration tests. Nothing
//! here calls into the mesh builder or the solver.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use cvmesh::delaunay::{tetrahedralize3, triangulate2};
use cvmesh::geometry::{Point2, Point3};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random2(n: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point2::new(rng.random(), rng.random())).collect()
}

pub fn random3(n: usize, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point3::new(rng.random(), rng.random(), rng.random())).collect()
}

/// Gaussian elimination with partial pivoting; `m` is `n x (n + 1)`.
pub fn gauss(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Some(x)
}

/// Point of equal power to all circles (spheres): solves
/// `2 (c_k - c_0) . x = |c_k|^2 - |c_0|^2 - (r_k^2 - r_0^2)`.
pub fn radical_center(centers: &[Vec<f64>], radii: &[f64]) -> Option<Vec<f64>> {
    let d = centers[0].len();
    let n2 = |v: &Vec<f64>| v.iter().map(|x| x * x).sum::<f64>();
    let rows = (1..=d)
        .map(|k| {
            let mut row: Vec<f64> = (0..d).map(|c| 2.0 * (centers[k][c] - centers[0][c])).collect();
            row.push(n2(&centers[k]) - n2(&centers[0]) - (radii[k] * radii[k] - radii[0] * radii[0]));
            row
        })
        .collect();
    gauss(rows)
}

pub fn power(q: &[f64], center: &[f64], r: f64) -> f64 {
    q.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() - r * r
}

pub fn circumcircle(a: &Point2, b: &Point2, c: &Point2) -> (Point2, f64) {
    let q = radical_center(&[vec![a.x, a.y], vec![b.x, b.y], vec![c.x, c.y]], &[0.0; 3]).unwrap();
    let center = Point2::new(q[0], q[1]);
    (center, (center - a).norm_squared())
}

pub fn circumsphere(p: [&Point3; 4]) -> (Point3, f64) {
    let c: Vec<Vec<f64>> = p.iter().map(|q| vec![q.x, q.y, q.z]).collect();
    let q = radical_center(&c, &[0.0; 4]).unwrap();
    let center = Point3::new(q[0], q[1], q[2]);
    (center, (center - p[0]).norm_squared())
}

/// Monotone-chain hull area.
pub fn hull_area(points: &[Point2]) -> f64 {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let cross = |o: &Point2, a: &Point2, b: &Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point2> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    let n = hull.len();
    0.5 * (0..n).map(|k| hull[k].x * hull[(k + 1) % n].y - hull[(k + 1) % n].x * hull[k].y).sum::<f64>()
}

/// Hull volume for points in general position: every triple whose plane has
/// all other points on one side is a hull facet.
pub fn hull_volume(points: &[Point3]) -> f64 {
    let n = points.len();
    let centroid = points.iter().fold(Point3::origin(), |acc, p| acc + p.coords / n as f64);
    let mut vol = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let normal = (points[b] - points[a]).cross(&(points[c] - points[a]));
                let (mut pos, mut neg) = (false, false);
                for (k, p) in points.iter().enumerate() {
                    if k == a || k == b || k == c {
                        continue;
                    }
                    let s = normal.dot(&(p - points[a]));
                    pos |= s > 0.0;
                    neg |= s < 0.0;
                }
                if !(pos && neg) {
                    vol += (normal.dot(&(points[a] - centroid)) / 6.0).abs();
                }
            }
        }
    }
    vol
}

/// Triangular lattice of unit spacing inside a disk of `radius` spacings,
/// jittered, with a ring of points on the circle; scaled into the unit box.
pub fn disk_lattice(radius: f64, jitter: f64, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = radius.ceil() as i64 + 1;
    let mut v = Vec::new();
    for y in -m..=m {
        for x in -2 * m..=2 * m {
            let p = Point2::new(x as f64 + 0.5 * y.rem_euclid(2) as f64, y as f64 * 3f64.sqrt() / 2.0);
            if p.coords.norm() < radius - 0.45 {
                v.push(Point2::new(p.x + rng.random_range(-jitter..jitter), p.y + rng.random_range(-jitter..jitter)));
            }
        }
    }
    let k = (2.0 * PI * radius).round() as usize;
    let off: f64 = rng.random_range(0.0..1.0);
    for t in 0..k {
        let th = (t as f64 + off + rng.random_range(-jitter..jitter)) * 2.0 * PI / k as f64;
        v.push(Point2::new(radius * th.cos(), radius * th.sin()));
    }
    v.iter().map(|p| Point2::new(0.5 + p.x / (2.2 * radius), 0.5 + p.y / (2.2 * radius))).collect()
}

/// Body-centered cubic lattice inside a ball plus a Fibonacci sphere; scaled
/// into the unit box.
pub fn ball_lattice(radius: f64, jitter: f64, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = radius.ceil() as i64 + 1;
    let mut v = Vec::new();
    for x in -m..=m {
        for y in -m..=m {
            for z in -m..=m {
                for o in [0.0, 0.5] {
                    let p = Point3::new(x as f64 + o, y as f64 + o, z as f64 + o);
                    if p.coords.norm() < radius - 0.45 {
                        let mut j = || rng.random_range(-jitter..jitter);
                        v.push(Point3::new(p.x + j(), p.y + j(), p.z + j()));
                    }
                }
            }
        }
    }
    let k = (4.0 * PI * radius * radius / 0.8).round().max(8.0) as usize;
    let golden = PI * (3.0 - 5f64.sqrt());
    let off: f64 = rng.random_range(0.0..2.0 * PI);
    for t in 0..k {
        let z = 1.0 - 2.0 * (t as f64 + 0.5) / k as f64;
        let rr = (1.0 - z * z).sqrt();
        let th = golden * t as f64 + off;
        v.push(Point3::new(radius * rr * th.cos(), radius * rr * th.sin(), radius * z));
    }
    v.iter()
        .map(|p| Point3::new(0.5 + p.x / (2.2 * radius), 0.5 + p.y / (2.2 * radius), 0.5 + p.z / (2.2 * radius)))
        .collect()
}

/// Half-spaces `n . x <= c`.
type HalfSpace = (Vec<f64>, f64);

fn bisectors(points: &[Vec<f64>], i: usize, lo: &[f64], hi: &[f64]) -> Vec<HalfSpace> {
    let d = lo.len();
    let mut hs: Vec<HalfSpace> = Vec::new();
    for (j, pj) in points.iter().enumerate() {
        if j == i {
            continue;
        }
        let n: Vec<f64> = (0..d).map(|k| pj[k] - points[i][k]).collect();
        let c = (0..d).map(|k| n[k] * 0.5 * (pj[k] + points[i][k])).sum();
        hs.push((n, c));
    }
    for k in 0..d {
        let mut n = vec![0.0; d];
        n[k] = -1.0;
        hs.push((n.clone(), -lo[k]));
        n[k] = 1.0;
        hs.push((n, hi[k]));
    }
    hs
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of the Voronoi cell of `i` inside the box, by enumerating every
/// `d`-subset of bisector and box planes.
pub fn voronoi_vertices(points: &[Vec<f64>], i: usize, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let d = lo.len();
    let diam = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
    let hs = bisectors(points, i, lo, hi);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for combo in combinations(hs.len(), d) {
        let rows: Vec<Vec<f64>> = combo
            .iter()
            .map(|&h| {
                let mut r = hs[h].0.clone();
                r.push(hs[h].1);
                r
            })
            .collect();
        let Some(x) = gauss(rows) else { continue };
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let feasible = hs.iter().all(|(n, c)| {
            let nn = n.iter().map(|v| v * v).sum::<f64>().sqrt();
            n.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - c <= 1e-11 * nn * diam
        });
        if feasible && !out.iter().any(|v| dist(v, &x) < 1e-11 * diam) {
            out.push(x);
        }
    }
    out
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Symmetric largest nearest-neighbor distance between two vertex sets.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one = |x: &[Vec<f64>], y: &[Vec<f64>]| x.iter().map(|p| y.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}

fn simplex_set<const K: usize>(s: &[[usize; K]]) -> BTreeSet<Vec<usize>> {
    s.iter()
        .map(|t| {
            let mut v = t.to_vec();
            v.sort();
            v
        })
        .collect()
}

/// Moves points, radii and one probe point per simplex jointly (minimum-norm
/// Gauss-Newton) until every simplex's circles pass through its probe point.
/// Returns `None` if it does not converge.
fn project(coords: &mut [Vec<f64>], simplices: &[Vec<usize>]) -> Option<Vec<f64>> {
    let d = coords[0].len();
    let n = coords.len();
    let t = simplices.len();
    let mut probes: Vec<Vec<f64>> = simplices
        .iter()
        .map(|s| radical_center(&s.iter().map(|&k| coords[k].clone()).collect::<Vec<_>>(), &vec![0.0; d + 1]).unwrap())
        .collect();
    let mut radii: Vec<f64> = (0..n)
        .map(|i| {
            let ds: Vec<f64> = simplices.iter().zip(&probes).filter(|(s, _)| s.contains(&i)).map(|(_, q)| dist(q, &coords[i])).collect();
            ds.iter().sum::<f64>() / ds.len() as f64
        })
        .collect();
    let nv = d * n + n + d * t;
    let rows = (d + 1) * t;
    for _ in 0..60 {
        let mut f = DVector::zeros(rows);
        let mut jac = DMatrix::zeros(rows, nv);
        for (ti, s) in simplices.iter().enumerate() {
            for (k, &p) in s.iter().enumerate() {
                let row = ti * (d + 1) + k;
                f[row] = power(&probes[ti], &coords[p], radii[p]);
                for c in 0..d {
                    let g = 2.0 * (probes[ti][c] - coords[p][c]);
                    jac[(row, d * p + c)] = -g;
                    jac[(row, d * n + n + d * ti + c)] = g;
                }
                jac[(row, d * n + p)] = -2.0 * radii[p];
            }
        }
        if f.amax() < 1e-16 {
            return Some(radii);
        }
        let step = jac.svd(true, true).solve(&f, 1e-12).ok()?;
        for p in 0..n {
            for c in 0..d {
                coords[p][c] -= step[d * p + c];
            }
            radii[p] -= step[d * n + p];
        }
        for (ti, q) in probes.iter_mut().enumerate() {
            for c in 0..d {
                q[c] -= step[d * n + n + d * ti + c];
            }
        }
    }
    None
}

/// Planar instance with a known radius vector whose every triangle has its
/// three circles meeting in one point. The Delaunay triangulation is kept.
pub fn zero_residual2(radius: f64, seed: u64) -> Option<(Vec<Point2>, Vec<f64>)> {
    let pts = disk_lattice(radius, 0.1, seed);
    let tri = triangulate2(&pts).ok()?;
    let mut coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y]).collect();
    let simplices: Vec<Vec<usize>> = tri.simplices.iter().map(|s| s.to_vec()).collect();
    let radii = project(&mut coords, &simplices)?;
    let moved: Vec<Point2> = coords.iter().map(|c| Point2::new(c[0], c[1])).collect();
    let again = triangulate2(&moved).ok()?;
    (simplex_set(&again.simplices) == simplex_set(&tri.simplices)).then_some((moved, radii))
}

pub fn zero_residual3(radius: f64, seed: u64) -> Option<(Vec<Point3>, Vec<f64>)> {
    let pts = ball_lattice(radius, 0.05, seed);
    let tet = tetrahedralize3(&pts).ok()?;
    let mut coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y, p.z]).collect();
    let simplices: Vec<Vec<usize>> = tet.simplices.iter().map(|s| s.to_vec()).collect();
    let radii = project(&mut coords, &simplices)?;
    let moved: Vec<Point3> = coords.iter().map(|c| Point3::new(c[0], c[1], c[2])).collect();
    let again = tetrahedralize3(&moved).ok()?;
    (simplex_set(&again.simplices) == simplex_set(&tet.simplices)).then_some((moved, radii))
}

/// Largest `|power| / scale^2` of the radical center over the simplices, where `scale`
/// is the longest edge of the simplex.
pub fn max_scaled_power(coords: &[Vec<f64>], simplices: &[Vec<usize>], radii: &[f64]) -> f64 {
    simplices
        .iter()
        .map(|s| {
            let c: Vec<Vec<f64>> = s.iter().map(|&k| coords[k].clone()).collect();
            let r: Vec<f64> = s.iter().map(|&k| radii[k]).collect();
            let q = radical_center(&c, &r).unwrap();
            let scale2 = c.iter().flat_map(|a| c.iter().map(move |b| dist(a, b))).fold(0.0, f64::max).powi(2);
            let p0 = power(&q, &c[0], r[0]);
            (1..c.len()).map(|k| (power(&q, &c[k], r[k]) - p0).abs() / scale2).fold(p0.abs() / scale2, f64::max)
        })
        .fold(0.0, f64::max)
}
