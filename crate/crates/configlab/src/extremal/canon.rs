//! Canonical forms for small 3-uniform hypergraphs.
//!
//! The key of a state is its edge list relabeled to be lexicographically
//! minimal over all vertex relabelings that respect the refinement
//! partition (iterated degree-style coloring). The partition ordering is a
//! function of the colors alone, so isomorphic states always produce the
//! same key, which is all the seen-store needs.
//!
//! Edge codes order triples by (max, mid, min); with that ordering the edges
//! fully inside the assigned prefix form a prefix of the final key, which is
//! what makes incremental best-prefix pruning sound.

use crate::hypercore::Edge;

fn code(a: usize, b: usize, c: usize) -> u32 {
    debug_assert!(a < b && b < c && c < 128);
    ((c as u32) << 14) | ((b as u32) << 7) | a as u32
}

/// old color, sorted co-member color pairs, vertex id
type Signature = (usize, Vec<(usize, usize)>, usize);

/// Iterated refinement; returns a color per vertex with colors densely
/// numbered in signature order (so the numbering is isomorphism-invariant).
fn refine(n: usize, edges: &[Edge], incident: &[Vec<usize>]) -> Vec<usize> {
    let mut colors = vec![0usize; n];
    let mut class_count = 1usize;
    loop {
        let mut sigs: Vec<Signature> = Vec::with_capacity(n);
        for v in 0..n {
            let mut pairs: Vec<(usize, usize)> = incident[v]
                .iter()
                .map(|&ei| {
                    let others: Vec<usize> = edges[ei]
                        .vertices()
                        .into_iter()
                        .filter(|&u| u != v)
                        .collect();
                    let (x, y) = (colors[others[0]], colors[others[1]]);
                    (x.min(y), x.max(y))
                })
                .collect();
            pairs.sort_unstable();
            sigs.push((colors[v], pairs, v));
        }
        sigs.sort_unstable();
        let mut new_colors = vec![0usize; n];
        let mut next = 0usize;
        for i in 0..n {
            if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                next += 1;
            }
            new_colors[sigs[i].2] = next;
        }
        let new_count = next + 1;
        if new_count == class_count {
            return new_colors;
        }
        class_count = new_count;
        colors = new_colors;
    }
}

struct Minimizer<'a> {
    edges: &'a [Edge],
    incident: &'a [Vec<usize>],
    /// color required at each new-label position
    position_color: Vec<usize>,
    /// vertices of each color, ascending
    by_color: Vec<Vec<usize>>,
    /// true when every vertex of the color has no incident edge
    color_isolated: Vec<bool>,
    position_of: Vec<Option<usize>>,
    taken: Vec<bool>,
    det: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl Minimizer<'_> {
    fn dfs(&mut self, depth: usize, already_less: bool) {
        let n = self.position_color.len();
        if depth == n {
            if already_less || self.best.is_none() {
                self.best = Some(self.det.clone());
            }
            return;
        }
        let color = self.position_color[depth];
        let cands: Vec<usize> = self.by_color[color]
            .iter()
            .copied()
            .filter(|&v| !self.taken[v])
            .collect();
        // isolated vertices are interchangeable: no need to branch
        let cands = if self.color_isolated[color] {
            cands[..1].to_vec()
        } else {
            cands
        };
        for v in cands {
            self.taken[v] = true;
            self.position_of[v] = Some(depth);
            let before = self.det.len();
            let mut new_codes: Vec<u32> = Vec::new();
            for &ei in &self.incident[v] {
                let vs = self.edges[ei].vertices();
                let pos: Vec<Option<usize>> = vs.iter().map(|&u| self.position_of[u]).collect();
                if pos.iter().all(|p| p.is_some()) {
                    let mut p: Vec<usize> = pos.into_iter().map(|p| p.unwrap()).collect();
                    p.sort_unstable();
                    new_codes.push(code(p[0], p[1], p[2]));
                }
            }
            new_codes.sort_unstable();
            // all new codes carry max position == depth, so they extend det
            self.det.extend_from_slice(&new_codes);
            let mut prune = false;
            let mut less = already_less;
            if !less {
                if let Some(best) = &self.best {
                    for (mine, theirs) in self.det[before..].iter().zip(&best[before..]) {
                        match mine.cmp(theirs) {
                            std::cmp::Ordering::Greater => {
                                prune = true;
                                break;
                            }
                            std::cmp::Ordering::Less => {
                                less = true;
                                break;
                            }
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                }
            }
            if !prune {
                self.dfs(depth + 1, less);
            }
            self.det.truncate(before);
            self.position_of[v] = None;
            self.taken[v] = false;
        }
    }
}

/// Canonical key of the hypergraph (n, edges). Keys are equal exactly for
/// isomorphic edge lists on the same vertex count.
pub fn canonical_key(n: usize, edges: &[Edge]) -> Vec<u32> {
    if edges.is_empty() {
        return Vec::new();
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for v in e.vertices() {
            incident[v].push(i);
        }
    }
    let colors = refine(n, edges, &incident);
    let class_count = colors.iter().max().unwrap() + 1;
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for v in 0..n {
        by_color[colors[v]].push(v);
    }
    let color_isolated: Vec<bool> = by_color
        .iter()
        .map(|vs| vs.iter().all(|&v| incident[v].is_empty()))
        .collect();
    let mut position_color = Vec::with_capacity(n);
    for (c, members) in by_color.iter().enumerate() {
        position_color.extend(std::iter::repeat_n(c, members.len()));
    }
    let mut min = Minimizer {
        edges,
        incident: &incident,
        position_color,
        by_color,
        color_isolated,
        position_of: vec![None; n],
        taken: vec![false; n],
        det: Vec::with_capacity(edges.len()),
        best: None,
    };
    min.dfs(0, false);
    min.best.expect("at least one relabeling exists")
}

/// Cheap isomorphism invariant: sorted vertex degrees plus the sorted
/// degree sequence of the intersection graph (edges sharing >= 2 vertices).
/// Used to bucket states so most of them never need a full canonical key.
pub fn cheap_invariant(n: usize, edges: &[Edge]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut degrees = vec![0u32; n];
    for e in edges {
        for v in e.vertices() {
            degrees[v] += 1;
        }
    }
    degrees.sort_unstable();
    let mut ig_degrees: Vec<u32> = edges
        .iter()
        .map(|e| {
            edges
                .iter()
                .filter(|f| *f != e && e.vertex_set().intersection_len(&f.vertex_set()) >= 2)
                .count() as u32
        })
        .collect();
    ig_degrees.sort_unstable();
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    degrees.hash(&mut hasher);
    ig_degrees.hash(&mut hasher);
    (edges.len() as u64).hash(&mut hasher);
    hasher.finish()
}
