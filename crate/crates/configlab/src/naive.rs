//! Slow reference implementations used as independent oracles in tests and
//! in the verification suites.
//!
//! Nothing here shares search logic with the fast detectors: subsets are
//! enumerated outright and spans recomputed from scratch, so agreement
//! between the two paths is meaningful evidence.

use crate::hypercore::{Edge, Hypergraph, VertexSet};

/// Plain enumeration over all C(m,k) edge subsets in lexicographic order;
/// returns the first k-subset spanning at most s vertices.
pub fn find_configuration_naive(h: &Hypergraph, s: usize, k: usize) -> Option<Vec<usize>> {
    let m = h.edge_count();
    if k == 0 || k > m {
        return None;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut span = VertexSet::new();
        for &i in &subset {
            span.union_with(&h.edges()[i].vertex_set());
        }
        if span.len() <= s {
            return Some(subset);
        }
        // advance to the next combination
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if subset[pos] != m - k + pos {
                break;
            }
        }
        subset[pos] += 1;
        for i in pos + 1..k {
            subset[i] = subset[i - 1] + 1;
        }
    }
}

/// As [`find_configuration_naive`] but restricted to subsets containing
/// `root`; first hit in lexicographic order of the full subset. For a fixed
/// root, lexicographic order over the other k-1 picks matches lexicographic
/// order over the full k-subsets.
pub fn find_configuration_with_naive(
    h: &Hypergraph,
    s: usize,
    k: usize,
    root: usize,
) -> Option<Vec<usize>> {
    let m = h.edge_count();
    if k == 0 || k > m {
        return None;
    }
    let others: Vec<usize> = (0..m).filter(|&i| i != root).collect();
    let picks = k - 1;
    if picks > others.len() {
        return None;
    }
    let root_span = h.edges()[root].vertex_set();
    if picks == 0 {
        return (root_span.len() <= s).then(|| vec![root]);
    }
    let mut idx: Vec<usize> = (0..picks).collect();
    loop {
        let mut span = root_span;
        for &p in &idx {
            span.union_with(&h.edges()[others[p]].vertex_set());
        }
        if span.len() <= s {
            let mut subset: Vec<usize> = idx.iter().map(|&p| others[p]).collect();
            subset.push(root);
            subset.sort_unstable();
            return Some(subset);
        }
        let mut pos = picks;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if idx[pos] != others.len() - picks + pos {
                break;
            }
        }
        idx[pos] += 1;
        for i in pos + 1..picks {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

pub fn is_free_naive(h: &Hypergraph, s: usize, k: usize) -> bool {
    find_configuration_naive(h, s, k).is_none()
}

pub fn is_g_free_naive(h: &Hypergraph, k: usize) -> bool {
    if !is_free_naive(h, k + 2, k) {
        return false;
    }
    for ell in crate::configs::g_levels(k, h.multi_allowed()) {
        if !is_free_naive(h, ell + 1, ell) {
            return false;
        }
    }
    true
}

/// Checks k-maximality by enumerating every strict superset of `members`
/// with at most k-1 edges and verifying each spans at least its size + 2.
pub fn k_maximal_naive(h: &Hypergraph, members: &[usize], k: usize) -> bool {
    let m = h.edge_count();
    let others: Vec<usize> = (0..m).filter(|i| !members.contains(i)).collect();
    let base: Vec<usize> = members.to_vec();
    let max_extra = (k - 1).saturating_sub(base.len());
    for extra in 1..=max_extra {
        let mut idx: Vec<usize> = (0..extra).collect();
        if extra > others.len() {
            break;
        }
        loop {
            let mut span = VertexSet::new();
            for &i in &base {
                span.union_with(&h.edges()[i].vertex_set());
            }
            for &p in &idx {
                span.union_with(&h.edges()[others[p]].vertex_set());
            }
            let size = base.len() + extra;
            if span.len() < size + 2 {
                return false; // a (size+1, size)-configuration extends it
            }
            let mut pos = extra;
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                if idx[pos] != others.len() - extra + pos {
                    break;
                }
            }
            if done {
                break;
            }
            idx[pos] += 1;
            for i in pos + 1..extra {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    true
}

/// Freeness target for [`max_free_naive`].
#[derive(Debug, Clone, Copy)]
pub enum NaiveMode {
    /// No (s,k)-configuration.
    F { s: usize, k: usize },
    /// No (k+2,k)- and no (l+1,l)-configuration, l in [2,k-1].
    G { k: usize },
}

fn free_in_mode(h: &Hypergraph, mode: NaiveMode) -> bool {
    match mode {
        NaiveMode::F { s, k } => is_free_naive(h, s, k),
        NaiveMode::G { k } => is_g_free_naive(h, k),
    }
}

/// Exhaustive maximum over all free simple hypergraphs on n labeled
/// vertices: plain DFS over ascending triple lists, no symmetry reduction,
/// every extension re-checked from scratch. Desk oracle for n <= 6 or so.
pub fn max_free_naive(n: usize, mode: NaiveMode) -> (usize, Vec<Edge>) {
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push(Edge::new(a, b, c).unwrap());
            }
        }
    }
    let mut best: (usize, Vec<Edge>) = (0, Vec::new());
    let mut cur: Vec<Edge> = Vec::new();
    fn rec(
        n: usize,
        triples: &[Edge],
        mode: NaiveMode,
        start: usize,
        cur: &mut Vec<Edge>,
        best: &mut (usize, Vec<Edge>),
    ) {
        if cur.len() > best.0 {
            *best = (cur.len(), cur.clone());
        }
        for i in start..triples.len() {
            cur.push(triples[i]);
            let candidate = Hypergraph::new(n, cur.clone(), false).expect("distinct triples");
            if free_in_mode(&candidate, mode) {
                rec(n, triples, mode, i + 1, cur, best);
            }
            cur.pop();
        }
    }
    rec(n, &triples, mode, 0, &mut cur, &mut best);
    best
}

/// The packing-number formula floor(n/3 * floor((n-1)/2)), minus one when
/// n = 5 (mod 6). Used as a cross-check against the search oracle, never as
/// ground truth.
pub fn packing_number_formula(n: usize) -> usize {
    let base = n * ((n - 1) / 2) / 3;
    if n % 6 == 5 {
        base - 1
    } else {
        base
    }
}
