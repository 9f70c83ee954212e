use std::collections::HashMap;

use nalgebra::Point;

/// Shared vertex storage that merges points closer than `tol`.
pub(crate) struct VertexPool<const D: usize> {
    tol: f64,
    buckets: HashMap<[i64; D], Vec<usize>>,
    pub points: Vec<Point<f64, D>>,
}

impl<const D: usize> VertexPool<D> {
    pub fn new(tol: f64) -> Self {
        VertexPool {
            tol,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn bucket(&self, p: &Point<f64, D>) -> [i64; D] {
        std::array::from_fn(|d| (p[d] / self.tol).floor() as i64)
    }

    /// Index of a stored point within `tol` of `p` (the oldest one), or of `p`
    /// itself after storing it.
    pub fn insert(&mut self, p: Point<f64, D>) -> usize {
        let home = self.bucket(&p);
        let mut best: Option<usize> = None;
        for code in 0..3usize.pow(D as u32) {
            let mut key = home;
            let mut c = code;
            for k in key.iter_mut() {
                *k += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    if (self.points[id] - p).norm() <= self.tol && best.is_none_or(|b| id < b) {
                        best = Some(id);
                    }
                }
            }
        }
        best.unwrap_or_else(|| {
            let id = self.points.len();
            self.points.push(p);
            self.buckets.entry(home).or_default().push(id);
            id
        })
    }
}
