//! Candidate control-volume vertices as closed-form functions of the radii.
//!
//! For three circles (four spheres) the subtraction of the circle equations
//! pairwise leaves a linear system whose solution is the radical center: the
//! unique point with equal power to every circle of the simplex. When the
//! circles do share a common point, that point is the radical center and its
//! power is zero.

use nalgebra::Point;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3, EPS_AREA, EPS_VOL};

/// A vertex produced by one triangle or tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateVertex<const D: usize> {
    pub position: Point<f64, D>,
    pub simplex: usize,
    /// Absolute power of the vertex with respect to the simplex's circles.
    pub residual: f64,
}

/// Power of `q` with respect to the circle or sphere `(center, radius)`.
pub fn power<const D: usize>(q: &Point<f64, D>, center: &Point<f64, D>, radius: f64) -> f64 {
    (q - center).norm_squared() - radius * radius
}

/// Radical center of three circles.
///
/// Evaluates the closed form x̂(r₁,r₂,r₃), ŷ(r₁,r₂,r₃) in a frame whose origin
/// is the first center.
pub fn vertex2(c: [&Point2; 3], r: [f64; 3]) -> Result<CandidateVertex<2>> {
    let (a1, b1) = (0.0, 0.0);
    let (a2, b2) = (c[1].x - c[0].x, c[1].y - c[0].y);
    let (a3, b3) = (c[2].x - c[0].x, c[2].y - c[0].y);
    let (r1, r2, r3) = (r[0] * r[0], r[1] * r[1], r[2] * r[2]);
    let det = (a1 - a2) * (b1 - b3) - (a1 - a3) * (b1 - b2);
    let longest = (a2 * a2 + b2 * b2)
        .max(a3 * a3 + b3 * b3)
        .max((a3 - a2).powi(2) + (b3 - b2).powi(2));
    // |det| is twice the triangle area.
    if longest == 0.0 || 0.5 * det.abs() <= EPS_AREA * longest {
        return Err(Error::DegenerateTriangle);
    }
    let den = 2.0 * det;
    let (s1, s2, s3) = (a1 * a1 + b1 * b1, a2 * a2 + b2 * b2, a3 * a3 + b3 * b3);
    let x = (-(b2 - b3) * r1 + (b1 - b3) * r2 - (b1 - b2) * r3 + s1 * (b2 - b3) - s2 * (b1 - b3) + s3 * (b1 - b2))
        / den;
    let y = ((a2 - a3) * r1 - (a1 - a3) * r2 + (a1 - a2) * r3 - s1 * (a2 - a3) + s2 * (a1 - a3) - s3 * (a1 - a2))
        / den;
    let position = Point2::new(c[0].x + x, c[0].y + y);
    Ok(CandidateVertex {
        position,
        simplex: 0,
        residual: power(&position, c[0], r[0]).abs(),
    })
}

/// Cramer's-rule data for the radical center of four spheres. All entries
/// are expressed in a frame centered on the first sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CramerDeterminants {
    pub w: f64,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
    pub delta: [f64; 3],
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl CramerDeterminants {
    pub fn new(c: [&Point3; 4], r: [f64; 4]) -> Self {
        let rel: Vec<[f64; 3]> = c
            .iter()
            .map(|p| [p.x - c[0].x, p.y - c[0].y, p.z - c[0].z])
            .collect();
        let sq = |v: &[f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let mut rows = [[0.0; 3]; 3];
        let mut delta = [0.0; 3];
        for l in 1..4 {
            for d in 0..3 {
                rows[l - 1][d] = 2.0 * (rel[0][d] - rel[l][d]);
            }
            delta[l - 1] = r[l] * r[l] - r[0] * r[0] + sq(&rel[0]) - sq(&rel[l]);
        }
        let with_column = |k: usize| {
            let mut m = rows;
            for l in 0..3 {
                m[l][k] = delta[l];
            }
            det3(m)
        };
        CramerDeterminants {
            w: det3(rows),
            wx: with_column(0),
            wy: with_column(1),
            wz: with_column(2),
            delta,
        }
    }
}

/// Radical center of four spheres, `(Wx/W, Wy/W, Wz/W)`.
pub fn vertex3(c: [&Point3; 4], r: [f64; 4]) -> Result<CandidateVertex<3>> {
    let cramer = CramerDeterminants::new(c, r);
    let mut longest: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            longest = longest.max((c[a] - c[b]).norm());
        }
    }
    // W = -48 times the signed volume.
    if longest == 0.0 || cramer.w.abs() / 48.0 <= EPS_VOL * longest.powi(3) {
        return Err(Error::DegenerateTetrahedron);
    }
    let position = Point3::new(
        c[0].x + cramer.wx / cramer.w,
        c[0].y + cramer.wy / cramer.w,
        c[0].z + cramer.wz / cramer.w,
    );
    Ok(CandidateVertex {
        position,
        simplex: 0,
        residual: power(&position, c[0], r[0]).abs(),
    })
}
