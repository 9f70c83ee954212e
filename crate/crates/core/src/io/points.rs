//! Seeded random point clouds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};

/// Candidate draws allowed per requested point.
const ATTEMPTS_PER_POINT: usize = 1000;
/// Separation as a fraction of `side / N^(1/d)`.
const SEPARATION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub enum PointSet {
    Planar(Vec<Point2>),
    Spatial(Vec<Point3>),
}

impl PointSet {
    pub fn dim(&self) -> usize {
        match self {
            PointSet::Planar(_) => 2,
            PointSet::Spatial(_) => 3,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Planar(p) => p.len(),
            PointSet::Spatial(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coords(&self) -> Vec<Vec<f64>> {
        match self {
            PointSet::Planar(p) => p.iter().map(|q| vec![q.x, q.y]).collect(),
            PointSet::Spatial(p) => p.iter().map(|q| vec![q.x, q.y, q.z]).collect(),
        }
    }

    pub fn from_coords(dim: usize, coords: &[Vec<f64>]) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
        match dim {
            2 => Ok(PointSet::Planar(coords.iter().map(|c| Point2::new(c[0], c[1])).collect())),
            3 => Ok(PointSet::Spatial(coords.iter().map(|c| Point3::new(c[0], c[1], c[2])).collect())),
            d => Err(Error::InvalidConfig(format!("dimension must be 2 or 3, got {d}"))),
        }
    }
}

/// Smallest allowed distance between two generated points.
pub fn min_separation(lo: &[f64], hi: &[f64], n: usize) -> f64 {
    separation(lo, hi, n, SEPARATION)
}

fn separation(lo: &[f64], hi: &[f64], n: usize, factor: f64) -> f64 {
    let side = lo.iter().zip(hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    factor * side / (n.max(1) as f64).powf(1.0 / lo.len() as f64)
}

/// `n` uniform points strictly inside the box `lo..hi`, no two closer than
/// [`min_separation`]. The same seed gives the same points everywhere.
pub fn generate_points(n: usize, seed: u64, lo: &[f64], hi: &[f64]) -> Result<PointSet> {
    generate_separated(n, seed, lo, hi, SEPARATION)
}

fn generate_separated(n: usize, seed: u64, lo: &[f64], hi: &[f64], factor: f64) -> Result<PointSet> {
    let dim = lo.len();
    if hi.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: hi.len() });
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
        return Err(Error::InvalidConfig("domain box has non-positive extent".into()));
    }
    let sep2 = separation(lo, hi, n, factor).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while placed.len() < n {
        if attempts == ATTEMPTS_PER_POINT * n {
            return Err(Error::RejectionBudgetExceeded { placed: placed.len(), requested: n });
        }
        attempts += 1;
        let p: Vec<f64> = (0..dim).map(|d| lo[d] + rng.random::<f64>() * (hi[d] - lo[d])).collect();
        if p.iter().enumerate().any(|(d, x)| *x <= lo[d] || *x >= hi[d]) {
            continue;
        }
        let clear = placed.iter().all(|q| q.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>() >= sep2);
        if clear {
            placed.push(p);
        }
    }
    PointSet::from_coords(dim, &placed)
}
