use cvmesh::complex::{PlanarComplex, SpatialComplex};
use cvmesh::geometry::{Point2, Point3};
use cvmesh::io::{generate_points, PointSet};
use cvmesh::mesh::{build_volumes2, build_volumes3, BuildOptions, ControlVolumeMesh, Domain2, Domain3};
use cvmesh::solver::optimize::OptimizerParams;
use cvmesh::solver::{solve_radii, RadiusMode, SolveOptions};

mod common;
use common::{hausdorff, voronoi_vertices};

fn equal_radii(c: &dyn cvmesh::complex::Complex) -> Vec<f64> {
    solve_radii(c, RadiusMode::EqualRadii, &SolveOptions::default(), &OptimizerParams::default())
        .unwrap()
        .radii
        .r
}

/// Largest distance between a cell and its oracle, relative to the domain diameter.
fn worst_cell(mesh: &dyn ControlVolumeMesh, points: &[Vec<f64>], lo: &[f64], hi: &[f64]) -> f64 {
    (0..mesh.n_cells())
        .map(|c| {
            let got: Vec<Vec<f64>> = mesh.cell_vertices(c).into_iter().map(|v| mesh.vertex(v)).collect();
            let want = voronoi_vertices(points, mesh.owner(c), lo, hi);
            hausdorff(&got, &want) / mesh.diameter()
        })
        .fold(0.0, f64::max)
}

#[test]
fn square_with_center() {
    let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0), Point2::new(0.5, 0.5)];
    let c = PlanarComplex::new(pts.clone()).unwrap();
    let (lo, hi) = ([-0.05, -0.05], [1.05, 1.05]);
    let mesh = build_volumes2(&c, &equal_radii(&c), &BuildOptions::default()).unwrap();
    let coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y]).collect();
    assert!(worst_cell(&mesh, &coords, &lo, &hi) < 1e-12);
    assert!((mesh.area(4) - 0.5).abs() < 1e-14);
}

#[test]
fn cube_corners_with_center() {
    let mut pts: Vec<Point3> = (0..8).map(|k| Point3::new((k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64)).collect();
    pts.push(Point3::new(0.5, 0.5, 0.5));
    let c = SpatialComplex::new(pts.clone()).unwrap();
    let mesh = build_volumes3(&c, &equal_radii(&c), &BuildOptions::default()).unwrap();
    let coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y, p.z]).collect();
    assert!(worst_cell(&mesh, &coords, &[-0.05; 3], &[1.05; 3]) < 1e-12);
    // Octahedron |dx|+|dy|+|dz| <= 0.75 less six pyramids cut off by the box
    // faces at distance 0.55.
    let center = 4.0 / 3.0 * 0.75f64.powi(3) - 6.0 * (2.0 * 0.2f64.powi(2) * 0.2 / 3.0);
    assert!((mesh.volume(8) - center).abs() < 1e-12, "{}", mesh.volume(8));
    let total: f64 = (0..9).map(|i| mesh.volume(i)).sum();
    assert!((total - 1.1f64.powi(3)).abs() < 1e-12);
}

#[test]
fn random_planar_sets() {
    for (n, seed) in [(10, 1), (25, 2), (40, 3)] {
        let PointSet::Planar(pts) = generate_points(n, seed, &[0.0, 0.0], &[1.0, 1.0]).unwrap() else { unreachable!() };
        let c = PlanarComplex::new(pts.clone()).unwrap();
        let domain = Domain2::rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        let opts = BuildOptions { domain: Some(domain), strict: true };
        let mesh = build_volumes2(&c, &equal_radii(&c), &opts).unwrap();
        let coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y]).collect();
        assert!(worst_cell(&mesh, &coords, &[0.0; 2], &[1.0; 2]) < 1e-9);
    }
}

#[test]
fn random_spatial_sets() {
    for (n, seed) in [(9, 1), (16, 2)] {
        let PointSet::Spatial(pts) = generate_points(n, seed, &[0.0; 3], &[1.0; 3]).unwrap() else { unreachable!() };
        let c = SpatialComplex::new(pts.clone()).unwrap();
        let domain = Domain3::cuboid(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0)).unwrap();
        let opts = BuildOptions { domain: Some(domain), strict: true };
        let mesh = build_volumes3(&c, &equal_radii(&c), &opts).unwrap();
        let coords: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.x, p.y, p.z]).collect();
        assert!(worst_cell(&mesh, &coords, &[0.0; 3], &[1.0; 3]) < 1e-9);
    }
}
