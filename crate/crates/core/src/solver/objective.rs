use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::Result;

/// How the per-simplex terms are reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// One thread, simplices in index order.
    #[default]
    Sequential,
    /// Terms are computed on the rayon pool and summed in index order, so the
    /// value is bit-identical to the sequential reduction.
    Parallel,
}

/// Sum over simplices of the squared, scale-normalized power of the radical
/// center: `Σ_s [pow(Q_s, circle_1) / ē_s²]²`, where `ē_s` is the mean edge
/// length of simplex `s`.
///
/// It is zero exactly when every simplex's circles (spheres) pass through a
/// common point, and invariant under uniform scaling of coordinates and radii.
pub struct Objective<'a> {
    complex: &'a dyn Complex,
    reduction: Reduction,
}

impl<'a> Objective<'a> {
    /// Fails if any simplex is degenerate; afterwards evaluation is total.
    pub fn new(complex: &'a dyn Complex) -> Result<Self> {
        let probe = vec![1.0; complex.n_points()];
        for s in 0..complex.n_simplices() {
            complex.scaled_power(s, &probe)?;
        }
        Ok(Objective {
            complex,
            reduction: Reduction::Sequential,
        })
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    /// Signed scaled power per simplex.
    pub fn terms(&self, radii: &[f64]) -> Vec<f64> {
        let term = |s: usize| self.complex.scaled_power(s, radii).expect("simplices checked at construction");
        match self.reduction {
            Reduction::Sequential => (0..self.complex.n_simplices()).map(term).collect(),
            Reduction::Parallel => (0..self.complex.n_simplices()).into_par_iter().map(term).collect(),
        }
    }

    pub fn value(&self, radii: &[f64]) -> f64 {
        self.terms(radii).iter().map(|t| t * t).sum()
    }

    /// Largest per-simplex `|power| / ē²`.
    pub fn max_residual(&self, radii: &[f64]) -> f64 {
        self.terms(radii).iter().fold(0.0, |m, t| m.max(t.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::PlanarComplex;
    use crate::geometry::Point2;

    fn points() -> Vec<Point2> {
        [[0.0, 0.0], [1.0, 0.1], [0.2, 0.9], [1.1, 1.0], [0.55, 0.45], [1.6, 0.4]]
            .iter()
            .map(|c| Point2::new(c[0], c[1]))
            .collect()
    }

    #[test]
    fn equal_radii_measure_circumradius_mismatch() {
        let c = PlanarComplex::new(points()).unwrap();
        let obj = Objective::new(&c).unwrap();
        let r = 0.4;
        let radii = vec![r; 6];
        let mut expected = 0.0;
        for s in &c.tri.simplices {
            let (a, b, d) = (c.points[s[0]], c.points[s[1]], c.points[s[2]]);
            let (la, lb, ld) = ((b - d).norm(), (a - d).norm(), (a - b).norm());
            let area = 0.5 * (b - a).perp(&(d - a)).abs();
            let big_r = la * lb * ld / (4.0 * area);
            let mean = (la + lb + ld) / 3.0;
            expected += ((big_r * big_r - r * r) / (mean * mean)).powi(2);
        }
        let got = obj.value(&radii);
        assert!((got - expected).abs() <= 1e-12 * expected, "{got} vs {expected}");
    }

    #[test]
    fn uniform_scaling_is_invisible() {
        let radii = [0.3, 0.35, 0.28, 0.4, 0.2, 0.33];
        let base = PlanarComplex::new(points()).unwrap();
        let v0 = Objective::new(&base).unwrap().value(&radii);
        for lambda in [1e-3, 0.5, 7.0, 1e4] {
            let scaled = PlanarComplex::new(points().iter().map(|p| Point2::new(p.x * lambda, p.y * lambda)).collect()).unwrap();
            let r: Vec<f64> = radii.iter().map(|r| r * lambda).collect();
            let v = Objective::new(&scaled).unwrap().value(&r);
            assert!((v - v0).abs() <= 1e-10 * v0, "lambda {lambda}: {v} vs {v0}");
        }
    }

    #[test]
    fn zero_at_an_exact_intersection() {
        // One triangle, radii = distances to an interior probe point.
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.3, 0.8)];
        let q = Point2::new(0.4, 0.3);
        let radii: Vec<f64> = pts.iter().map(|p| (p - q).norm()).collect();
        let c = PlanarComplex::new(pts).unwrap();
        assert!(Objective::new(&c).unwrap().value(&radii) < 1e-28);
    }

    #[test]
    fn parallel_reduction_is_bit_identical() {
        let c = PlanarComplex::new(points()).unwrap();
        let radii = [0.3, 0.35, 0.28, 0.4, 0.2, 0.33];
        let seq = Objective::new(&c).unwrap().value(&radii);
        let par = Objective::new(&c).unwrap().with_reduction(Reduction::Parallel).value(&radii);
        assert_eq!(seq.to_bits(), par.to_bits());
    }
}
