//! Dimension-generic incremental Bowyer-Watson insertion.
//!
//! The triangulation is kept as a closed manifold: every convex-hull facet is
//! glued to a ghost simplex that contains the vertex at infinity. A ghost is in
//! conflict with a new point when the point sees its hull facet from outside,
//! so points beyond the current hull are handled the same way as interior
//! ones and no super-simplex coordinates ever enter a predicate.

use std::collections::HashMap;

/// Index standing in for the vertex at infinity.
pub(crate) const GHOST: usize = usize::MAX;
const FACE_GAP: usize = usize::MAX - 1;
const UNSET: usize = usize::MAX;

pub(crate) trait Kernel<const K: usize> {
    /// Positive when the finite simplex is positively oriented.
    fn orient(&self, s: &[usize; K]) -> f64;
    /// Positive when `p` is strictly inside the circumsphere of the
    /// positively oriented finite simplex `s`.
    fn in_sphere(&self, s: &[usize; K], p: usize) -> f64;
    /// For `p` lying in the affine hull of the finite facet `face`: whether it
    /// is strictly inside the facet's circumsphere.
    fn in_facet_ball(&self, face: &[usize], p: usize) -> bool;
}

pub(crate) struct Engine<'k, const K: usize, G: Kernel<K>> {
    kernel: &'k G,
    verts: Vec<[usize; K]>,
    nbrs: Vec<[usize; K]>,
    alive: Vec<bool>,
    free: Vec<usize>,
    mark: Vec<u32>,
    epoch: u32,
    last: usize,
}

fn replaced<const K: usize>(s: &[usize; K], i: usize, p: usize) -> [usize; K] {
    let mut t = *s;
    t[i] = p;
    t
}

fn face_key<const K: usize>(s: &[usize; K], i: usize) -> [usize; K] {
    let mut key = replaced(s, i, FACE_GAP);
    key.sort_unstable();
    key
}

impl<'k, const K: usize, G: Kernel<K>> Engine<'k, K, G> {
    /// Start from one positively oriented finite simplex and its K ghosts.
    pub(crate) fn new(kernel: &'k G, first: [usize; K]) -> Self {
        let mut engine = Engine {
            kernel,
            verts: Vec::new(),
            nbrs: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            mark: Vec::new(),
            epoch: 0,
            last: 0,
        };
        let mut created = vec![engine.alloc(first)];
        for i in 0..K {
            let mut ghost = replaced(&first, i, GHOST);
            let (a, b) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            ghost.swap(a, b);
            created.push(engine.alloc(ghost));
        }
        engine.glue(&created);
        engine
    }

    fn alloc(&mut self, s: [usize; K]) -> usize {
        if let Some(slot) = self.free.pop() {
            self.verts[slot] = s;
            self.nbrs[slot] = [UNSET; K];
            self.alive[slot] = true;
            self.mark[slot] = 0;
            slot
        } else {
            self.verts.push(s);
            self.nbrs.push([UNSET; K]);
            self.alive.push(true);
            self.mark.push(0);
            self.verts.len() - 1
        }
    }

    /// Pair up the unglued facets shared among `simplices`.
    fn glue(&mut self, simplices: &[usize]) {
        let mut open: HashMap<[usize; K], (usize, usize)> = HashMap::new();
        for &s in simplices {
            for i in 0..K {
                if self.nbrs[s][i] != UNSET {
                    continue;
                }
                let key = face_key(&self.verts[s], i);
                if let Some((t, j)) = open.remove(&key) {
                    self.nbrs[s][i] = t;
                    self.nbrs[t][j] = s;
                } else {
                    open.insert(key, (s, i));
                }
            }
        }
        debug_assert!(open.is_empty(), "unmatched facets after gluing");
    }

    fn is_ghost(&self, s: usize) -> bool {
        self.verts[s].contains(&GHOST)
    }

    fn conflicts(&self, s: usize, p: usize) -> bool {
        let v = &self.verts[s];
        match v.iter().position(|&x| x == GHOST) {
            None => self.kernel.in_sphere(v, p) > 0.0,
            Some(k) => {
                let o = self.kernel.orient(&replaced(v, k, p));
                if o != 0.0 {
                    return o > 0.0;
                }
                let face: Vec<usize> = v.iter().copied().filter(|&x| x != GHOST).collect();
                self.kernel.in_facet_ball(&face, p)
            }
        }
    }

    /// Find a simplex in conflict with `p` by walking from the last insertion.
    fn locate(&self, p: usize) -> usize {
        let mut s = self.last;
        if self.is_ghost(s) {
            let k = self.verts[s].iter().position(|&x| x == GHOST).unwrap();
            s = self.nbrs[s][k];
        }
        let budget = 4 * self.verts.len() + 16;
        'walk: for step in 0..budget {
            for r in 0..K {
                let i = (r + step) % K;
                if self.kernel.orient(&replaced(&self.verts[s], i, p)) < 0.0 {
                    let n = self.nbrs[s][i];
                    if self.is_ghost(n) {
                        return n;
                    }
                    s = n;
                    continue 'walk;
                }
            }
            return s;
        }
        (0..self.verts.len())
            .find(|&t| self.alive[t] && self.conflicts(t, p))
            .expect("no simplex in conflict with a new point")
    }

    pub(crate) fn insert(&mut self, p: usize) {
        let seed = self.locate(p);
        self.epoch += 1;
        let epoch = self.epoch;
        let mut cavity = vec![seed];
        self.mark[seed] = epoch;
        let mut head = 0;
        while head < cavity.len() {
            let c = cavity[head];
            head += 1;
            for i in 0..K {
                let n = self.nbrs[c][i];
                if self.mark[n] != epoch && self.conflicts(n, p) {
                    self.mark[n] = epoch;
                    cavity.push(n);
                }
            }
        }

        // Every new finite simplex must be positively oriented; grow the cavity
        // across any facet that `p` does not strictly see.
        let boundary = loop {
            let mut boundary = Vec::new();
            let mut grow = None;
            'scan: for &c in &cavity {
                for i in 0..K {
                    let n = self.nbrs[c][i];
                    if self.mark[n] == epoch {
                        continue;
                    }
                    let fresh = replaced(&self.verts[c], i, p);
                    if !fresh.contains(&GHOST) && self.kernel.orient(&fresh) <= 0.0 {
                        grow = Some(n);
                        break 'scan;
                    }
                    boundary.push((c, i, n));
                }
            }
            match grow {
                Some(n) => {
                    self.mark[n] = epoch;
                    cavity.push(n);
                }
                None => break boundary,
            }
        };

        for &c in &cavity {
            self.alive[c] = false;
        }
        let mut created = Vec::with_capacity(boundary.len());
        for &(c, i, n) in &boundary {
            let s = self.alloc(replaced(&self.verts[c], i, p));
            self.nbrs[s][i] = n;
            let back = self.nbrs[n].iter().position(|&x| x == c).unwrap();
            self.nbrs[n][back] = s;
            created.push(s);
        }
        self.glue(&created);
        self.free.extend(cavity);
        self.last = *created
            .iter()
            .find(|&&s| !self.is_ghost(s))
            .unwrap_or(&created[0]);
    }

    /// Finite simplices and their finite neighbors, in slot order.
    pub(crate) fn finish(self) -> (Vec<[usize; K]>, Vec<[Option<usize>; K]>) {
        let mut index = vec![usize::MAX; self.verts.len()];
        let mut simplices = Vec::new();
        for s in 0..self.verts.len() {
            if self.alive[s] && !self.is_ghost(s) {
                index[s] = simplices.len();
                simplices.push(self.verts[s]);
            }
        }
        let mut neighbors = Vec::with_capacity(simplices.len());
        for s in 0..self.verts.len() {
            if index[s] == usize::MAX {
                continue;
            }
            let mut row = [None; K];
            for (i, slot) in row.iter_mut().enumerate() {
                let n = self.nbrs[s][i];
                if index[n] != usize::MAX {
                    *slot = Some(index[n]);
                }
            }
            neighbors.push(row);
        }
        (simplices, neighbors)
    }
}
