use serde::{Deserialize, Serialize};

use crate::complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapKind {
    /// `L - (r_i + r_j) <= 0`; tangent circles land here.
    Overlapping,
    NonOverlapping,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOverlap {
    pub i: usize,
    pub j: usize,
    pub kind: OverlapKind,
}

pub fn overlap_kind(length: f64, ri: f64, rj: f64) -> OverlapKind {
    if length - (ri + rj) <= 0.0 {
        OverlapKind::Overlapping
    } else {
        OverlapKind::NonOverlapping
    }
}

/// Label every neighbor pair `(i, j)`, `i < j`.
pub fn classify_overlap(complex: &dyn Complex, radii: &[f64]) -> Vec<PairOverlap> {
    complex
        .edges()
        .into_iter()
        .map(|(i, j)| PairOverlap {
            i,
            j,
            kind: overlap_kind(complex.edge_length(i, j), radii[i], radii[j]),
        })
        .collect()
}
