use std::collections::{BTreeSet, HashMap};

use super::{Triangulation2, Triangulation3};

/// The neighbors of one point in counter-clockwise order.
///
/// For an interior point the ring is closed: `triangles[k]` is the triangle
/// spanned by the point, `neighbors[k]` and `neighbors[(k + 1) % M]`. On the
/// convex hull the ring is an open fan and has one triangle fewer than
/// neighbors; no triangle wraps around the hull exterior.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ring {
    pub neighbors: Vec<usize>,
    pub triangles: Vec<usize>,
    pub closed: bool,
}

impl Ring {
    /// Number of neighbors, `M(i)`.
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Consecutive neighbor pairs `(j(i,k), j(i,k+1))` that close a triangle
    /// with the owner, with the triangle index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let m = self.neighbors.len();
        self.triangles
            .iter()
            .enumerate()
            .map(move |(k, &t)| (self.neighbors[k], self.neighbors[(k + 1) % m], t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborMap2 {
    pub rings: Vec<Ring>,
}

impl NeighborMap2 {
    pub fn build(tri: &Triangulation2, n_points: usize) -> Self {
        let mut succ: Vec<HashMap<usize, (usize, usize)>> = vec![HashMap::new(); n_points];
        for (t, s) in tri.simplices.iter().enumerate() {
            for k in 0..3 {
                succ[s[k]].insert(s[(k + 1) % 3], (s[(k + 2) % 3], t));
            }
        }
        let rings = succ
            .into_iter()
            .map(|links| {
                if links.is_empty() {
                    return Ring::default();
                }
                let targets: BTreeSet<usize> = links.values().map(|&(b, _)| b).collect();
                let open_start = links.keys().copied().filter(|a| !targets.contains(a)).min();
                let start = open_start.unwrap_or_else(|| *links.keys().min().unwrap());
                let mut ring = Ring {
                    neighbors: vec![start],
                    triangles: Vec::new(),
                    closed: open_start.is_none(),
                };
                let mut at = start;
                while let Some(&(next, t)) = links.get(&at) {
                    ring.triangles.push(t);
                    if next == start {
                        break;
                    }
                    ring.neighbors.push(next);
                    at = next;
                }
                ring
            })
            .collect();
        NeighborMap2 { rings }
    }

    pub fn ring(&self, i: usize) -> &Ring {
        &self.rings[i]
    }

    /// Every neighbor pair `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .rings
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.neighbors.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// One tetrahedron incident to a point: `(i, opposite[0], opposite[1],
/// opposite[2])` is positively oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Star {
    pub tet: usize,
    pub opposite: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborMap3 {
    /// Incident tetrahedra per point; `stars[i].len()` is `N(i)`.
    pub stars: Vec<Vec<Star>>,
}

impl NeighborMap3 {
    pub fn build(tet: &Triangulation3, n_points: usize) -> Self {
        let mut stars = vec![Vec::new(); n_points];
        for (t, v) in tet.simplices.iter().enumerate() {
            // Even permutations bringing each vertex to the front.
            let rows = [
                (v[0], [v[1], v[2], v[3]]),
                (v[1], [v[0], v[3], v[2]]),
                (v[2], [v[0], v[1], v[3]]),
                (v[3], [v[2], v[1], v[0]]),
            ];
            for (i, opposite) in rows {
                stars[i].push(Star { tet: t, opposite });
            }
        }
        NeighborMap3 { stars }
    }

    pub fn star(&self, i: usize) -> &[Star] {
        &self.stars[i]
    }

    /// Distinct neighbors of `i`, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.stars[i].iter().flat_map(|s| s.opposite).collect();
        set.into_iter().collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.stars.len())
            .flat_map(|i| self.neighbors(i).into_iter().filter(move |&j| i < j).map(move |j| (i, j)))
            .collect()
    }
}
