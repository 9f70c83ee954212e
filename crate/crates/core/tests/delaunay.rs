use std::collections::BTreeSet;

use cvmesh::delaunay::{tetrahedralize3, triangulate2, NeighborMap2, NeighborMap3};
use cvmesh::geometry::{Point2, Point3};

mod common;
use common::{circumcircle, circumsphere, hull_area, hull_volume, random2, random3};

fn check_planar(points: &[Point2]) {
    let tri = triangulate2(points).unwrap();
    let mut area = 0.0;
    for s in &tri.simplices {
        let (a, b, c) = (&points[s[0]], &points[s[1]], &points[s[2]]);
        let signed = 0.5 * (b - a).perp(&(c - a));
        assert!(signed > 0.0, "triangle {s:?} not counter-clockwise");
        area += signed;
        let (center, r2) = circumcircle(a, b, c);
        for (k, p) in points.iter().enumerate() {
            if s.contains(&k) {
                continue;
            }
            assert!((p - center).norm_squared() >= r2 * (1.0 - 1e-9), "point {k} inside circumcircle of {s:?}");
        }
    }
    let hull = hull_area(points);
    assert!((area - hull).abs() <= 1e-9 * hull, "area {area} vs hull {hull}");

    // Ring round trip: rings reproduce exactly the triangle set.
    let nm = NeighborMap2::build(&tri, points.len());
    let from_rings: BTreeSet<[usize; 3]> = nm
        .rings
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.pairs().map(move |(a, b, _)| {
                let mut t = [i, a, b];
                t.sort();
                t
            })
        })
        .collect();
    let direct: BTreeSet<[usize; 3]> = tri
        .simplices
        .iter()
        .map(|s| {
            let mut t = *s;
            t.sort();
            t
        })
        .collect();
    assert_eq!(from_rings, direct);
}

fn check_spatial(points: &[Point3], volume: Option<f64>) {
    let tet = tetrahedralize3(points).unwrap();
    let mut total = 0.0;
    for (t, s) in tet.simplices.iter().enumerate() {
        let p = [&points[s[0]], &points[s[1]], &points[s[2]], &points[s[3]]];
        let vol = (p[1] - p[0]).cross(&(p[2] - p[0])).dot(&(p[3] - p[0])) / 6.0;
        assert!(vol > 0.0, "tetrahedron {s:?} not positively oriented");
        total += vol;
        let (center, r2) = circumsphere(p);
        for (k, q) in points.iter().enumerate() {
            if s.contains(&k) {
                continue;
            }
            assert!((q - center).norm_squared() >= r2 * (1.0 - 1e-9), "point {k} inside circumsphere of {s:?}");
        }
        for (i, n) in tet.neighbors[t].iter().enumerate() {
            if let Some(n) = n {
                assert!(tet.neighbors[*n].contains(&Some(t)), "adjacency not symmetric");
                let shared = s.iter().filter(|v| tet.simplices[*n].contains(v)).count();
                assert_eq!(shared, 3);
                assert!(!tet.simplices[*n].contains(&s[i]));
            }
        }
    }
    let expected = volume.unwrap_or_else(|| hull_volume(points));
    assert!((total - expected).abs() <= 1e-8 * expected, "volume {total} vs hull {expected}");
    let nm = NeighborMap3::build(&tet, points.len());
    for (i, star) in nm.stars.iter().enumerate() {
        assert!(!star.is_empty());
        assert!(star.iter().all(|s| !s.opposite.contains(&i)));
    }
}

#[test]
fn planar_random_sets_are_delaunay() {
    for (n, seed) in [(50, 1), (50, 2), (120, 3), (200, 4)] {
        check_planar(&random2(n, seed));
    }
}

#[test]
fn planar_grid_with_cocircular_ties() {
    let pts: Vec<Point2> = (0..36).map(|k| Point2::new((k % 6) as f64, (k / 6) as f64)).collect();
    check_planar(&pts);
}

#[test]
fn spatial_random_sets_are_delaunay() {
    for (n, seed) in [(30, 1), (45, 2), (60, 3)] {
        check_spatial(&random3(n, seed), None);
    }
}

#[test]
fn cube_corners() {
    let pts: Vec<Point3> = (0..8)
        .map(|k| Point3::new((k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64))
        .collect();
    check_spatial(&pts, Some(1.0));
    let mut with_center = pts.clone();
    with_center.push(Point3::new(0.5, 0.5, 0.5));
    check_spatial(&with_center, Some(1.0));
    let tet = tetrahedralize3(&with_center).unwrap();
    assert_eq!(tet.len(), 12);
}

#[test]
fn spatial_grid_with_cospherical_ties() {
    let pts: Vec<Point3> = (0..27)
        .map(|k| Point3::new((k % 3) as f64, ((k / 3) % 3) as f64, (k / 9) as f64))
        .collect();
    check_spatial(&pts, Some(8.0));
}

#[test]
fn permutation_gives_the_same_simplices() {
    let pts = random2(60, 11);
    let tri = triangulate2(&pts).unwrap();
    let mut perm: Vec<usize> = (0..pts.len()).collect();
    perm.reverse();
    perm.rotate_left(17);
    let shuffled: Vec<Point2> = perm.iter().map(|&k| pts[k]).collect();
    let other = triangulate2(&shuffled).unwrap();
    let canon = |simplices: &[[usize; 3]], map: &dyn Fn(usize) -> usize| -> BTreeSet<[usize; 3]> {
        simplices
            .iter()
            .map(|s| {
                let mut t = [map(s[0]), map(s[1]), map(s[2])];
                t.sort();
                t
            })
            .collect()
    };
    assert_eq!(canon(&tri.simplices, &|k| k), canon(&other.simplices, &|k| perm[k]));

    let pts3 = random3(25, 5);
    let tet = tetrahedralize3(&pts3).unwrap();
    let perm3: Vec<usize> = (0..25).rev().collect();
    let shuffled3: Vec<Point3> = perm3.iter().map(|&k| pts3[k]).collect();
    let other3 = tetrahedralize3(&shuffled3).unwrap();
    let canon4 = |simplices: &[[usize; 4]], map: &dyn Fn(usize) -> usize| -> BTreeSet<[usize; 4]> {
        simplices
            .iter()
            .map(|s| {
                let mut t = [map(s[0]), map(s[1]), map(s[2]), map(s[3])];
                t.sort();
                t
            })
            .collect()
    };
    assert_eq!(canon4(&tet.simplices, &|k| k), canon4(&other3.simplices, &|k| perm3[k]));
}

#[test]
fn construction_is_deterministic() {
    let pts = random3(40, 9);
    assert_eq!(tetrahedralize3(&pts).unwrap(), tetrahedralize3(&pts).unwrap());
}
