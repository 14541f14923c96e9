//! Exact (s,k)-configuration detection, the freeness predicates behind the
//! extremal functions f and g, and k-maximal configuration growth.
//!
//! An (s,k)-configuration is a set of k edges spanning at most s vertices.
//! The detector enumerates edge subsets in ascending index order with span
//! pruning, so it is exact (no false negatives) and the first witness found
//! is the lexicographically least one. When the remaining span budget drops
//! below 3 the candidate set shrinks to the edges meeting the current span,
//! which is what makes dense witnesses cheap to find; restarts (edges
//! disjoint from the current span) stay possible while the budget allows,
//! so disconnected configurations are found too.

use crate::hypercore::{Edge, EdgeIndexSet, Hypergraph, VertexSet};
use crate::{choose3, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A set of edge indices together with its size and span cardinality.
///
/// Witnesses an (s,k)-configuration exactly when `ell == k` and
/// `span_size <= s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub edges: EdgeIndexSet,
    pub ell: usize,
    #[serde(rename = "span")]
    pub span_size: usize,
}

impl Configuration {
    /// Builds a configuration from edge indices, computing the span.
    pub fn from_indices<I: IntoIterator<Item = usize>>(h: &Hypergraph, indices: I) -> Result<Self> {
        let edges: EdgeIndexSet = indices.into_iter().collect();
        let span = h.span(&edges)?;
        Ok(Configuration {
            ell: edges.len(),
            span_size: span.len(),
            edges,
        })
    }

    /// True if this is an (s,k)-configuration for the given parameters.
    pub fn witnesses(&self, s: usize, k: usize) -> bool {
        self.ell == k && self.span_size <= s
    }
}

// ---------------------------------------------------------------------------
// Detection
// ---------------------------------------------------------------------------

/// Shared DFS core over an edge list; also used by the incremental search
/// state in `extremal`, which owns its own lists.
pub(crate) struct DetectorInput<'a> {
    pub edges: &'a [Edge],
    pub incidence: &'a [Vec<usize>],
    pub multi: bool,
}

impl Hypergraph {
    pub(crate) fn detector_input(&self) -> DetectorInput<'_> {
        DetectorInput {
            edges: self.edges(),
            incidence: self.incidence_lists(),
            multi: self.multi_allowed(),
        }
    }
}

struct ConfigDfs<'a> {
    input: &'a DetectorInput<'a>,
    s: usize,
    k: usize,
    /// Edge index excluded from candidates (the forced root), or usize::MAX.
    skip: usize,
}

impl ConfigDfs<'_> {
    fn run(&self, chosen: &mut Vec<usize>, span: VertexSet, start: usize) -> bool {
        if chosen.len() == self.k {
            return true;
        }
        let m = self.input.edges.len();
        let needed = self.k - chosen.len();
        let budget = self.s - span.len();
        if !span.is_empty() && budget < 3 {
            // Every remaining edge must meet the current span: gather the
            // frontier from the incidence lists.
            let mut cands: Vec<usize> = Vec::new();
            for v in span.iter() {
                for &ei in &self.input.incidence[v] {
                    if ei >= start && ei != self.skip {
                        cands.push(ei);
                    }
                }
            }
            cands.sort_unstable();
            cands.dedup();
            for &j in &cands {
                let ev = self.input.edges[j].vertex_set();
                if ev.difference_len(&span) > budget {
                    continue;
                }
                chosen.push(j);
                if self.run(chosen, span.union(&ev), j + 1) {
                    return true;
                }
                chosen.pop();
            }
        } else {
            for j in start..m {
                if m - j < needed {
                    break;
                }
                if j == self.skip {
                    continue;
                }
                let ev = self.input.edges[j].vertex_set();
                if ev.difference_len(&span) > budget {
                    continue;
                }
                chosen.push(j);
                if self.run(chosen, span.union(&ev), j + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

pub(crate) fn detect(input: &DetectorInput, s: usize, k: usize) -> Option<Vec<usize>> {
    assert!(k >= 1 && s >= 3, "require k >= 1 and s >= 3");
    if k > input.edges.len() {
        return None;
    }
    // k distinct triples need C(s,3) >= k slots inside the span
    if !input.multi && choose3(s) < k as u64 {
        return None;
    }
    let dfs = ConfigDfs {
        input,
        s,
        k,
        skip: usize::MAX,
    };
    let mut chosen = Vec::with_capacity(k);
    if dfs.run(&mut chosen, VertexSet::new(), 0) {
        Some(chosen)
    } else {
        None
    }
}

/// Exact detection restricted to configurations containing `root`.
pub(crate) fn detect_through(
    input: &DetectorInput,
    s: usize,
    k: usize,
    root: usize,
) -> Option<Vec<usize>> {
    assert!(k >= 1 && s >= 3, "require k >= 1 and s >= 3");
    if k > input.edges.len() {
        return None;
    }
    if !input.multi && choose3(s) < k as u64 {
        return None;
    }
    let root_span = input.edges[root].vertex_set();
    if root_span.len() > s {
        return None;
    }
    let dfs = ConfigDfs {
        input,
        s,
        k,
        skip: root,
    };
    let mut chosen = vec![root];
    if dfs.run(&mut chosen, root_span, 0) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

/// Finds some (s,k)-configuration if one exists, else `None`; exact.
///
/// The witness returned is the lexicographically least edge-index set among
/// all witnesses.
pub fn find_configuration(h: &Hypergraph, s: usize, k: usize) -> Option<Configuration> {
    let input = h.detector_input();
    detect(&input, s, k).map(|idx| Configuration::from_indices(h, idx).expect("indices valid"))
}

/// Exact detection of an (s,k)-configuration containing the given edge.
pub fn find_configuration_through(
    h: &Hypergraph,
    s: usize,
    k: usize,
    root: usize,
) -> Result<Option<Configuration>> {
    h.edge(root)?;
    let input = h.detector_input();
    Ok(detect_through(&input, s, k, root)
        .map(|idx| Configuration::from_indices(h, idx).expect("indices valid")))
}

// ---------------------------------------------------------------------------
// Freeness predicates
// ---------------------------------------------------------------------------

/// The (l+1,l) levels that the g predicate checks on top of (k+2,k).
///
/// For k >= 3 this is l in [2, k-1]; for multi-hypergraphs at k = 2 the
/// (3,2) level still applies (repeated edges are exactly the simple-graph
/// degenerate case it rules out).
pub(crate) fn g_levels(k: usize, multi: bool) -> Vec<usize> {
    if k >= 3 {
        (2..=k - 1).collect()
    } else if multi {
        vec![2]
    } else {
        Vec::new()
    }
}

/// No (k+2,k)-configuration present.
pub fn is_f_free(h: &Hypergraph, k: usize) -> bool {
    assert!(k >= 2, "require k >= 2");
    find_configuration(h, k + 2, k).is_none()
}

/// The first (l+1,l) violation with l ascending from 2, if any.
pub fn g_violation(h: &Hypergraph, k: usize) -> Option<Configuration> {
    assert!(k >= 2, "require k >= 2");
    for ell in g_levels(k, h.multi_allowed()) {
        if let Some(conf) = find_configuration(h, ell + 1, ell) {
            return Some(conf);
        }
    }
    None
}

/// f-free and additionally (l+1,l)-free on every level of [`g_levels`].
pub fn is_g_free(h: &Hypergraph, k: usize) -> bool {
    is_f_free(h, k) && g_violation(h, k).is_none()
}

/// Freeness flags plus the first violating configuration when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub k: usize,
    pub is_f_free: bool,
    pub is_g_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Configuration>,
}

pub fn freeness_report(h: &Hypergraph, k: usize) -> FreenessReport {
    let f_violation = find_configuration(h, k + 2, k);
    let is_f = f_violation.is_none();
    let g_viol = if is_f { g_violation(h, k) } else { None };
    let is_g = is_f && g_viol.is_none();
    FreenessReport {
        k,
        is_f_free: is_f,
        is_g_free: is_g,
        first_violation: f_violation.or(g_viol),
    }
}

// ---------------------------------------------------------------------------
// k-maximal growth
// ---------------------------------------------------------------------------

/// Searches for an (l''+1,l'')-configuration strictly containing `conf` with
/// conf.ell < l'' <= k-1. Returns the first one found in ascending-index
/// order, or `None` when `conf` is k-maximal.
pub fn find_super_configuration(
    h: &Hypergraph,
    conf: &Configuration,
    k: usize,
) -> Result<Option<Configuration>> {
    let span = h.span(&conf.edges)?;
    if conf.ell >= k - 1 {
        return Ok(None); // the range (ell, k-1] is empty
    }
    let input = h.detector_input();
    let dfs = SuperDfs {
        input: &input,
        base_len: conf.ell,
        max_len: k - 1,
        span_cap: k, // any (l''+1,l'') with l'' <= k-1 spans at most k
        member: &conf.edges,
    };
    let mut added = Vec::new();
    if dfs.run(&mut added, span, 0) {
        let indices: Vec<usize> = conf.edges.iter().chain(added).collect();
        Ok(Some(Configuration::from_indices(h, indices)?))
    } else {
        Ok(None)
    }
}

struct SuperDfs<'a> {
    input: &'a DetectorInput<'a>,
    base_len: usize,
    max_len: usize,
    span_cap: usize,
    member: &'a EdgeIndexSet,
}

impl SuperDfs<'_> {
    fn run(&self, added: &mut Vec<usize>, span: VertexSet, start: usize) -> bool {
        let t = self.base_len + added.len();
        if !added.is_empty() && span.len() <= t + 1 {
            return true;
        }
        if t == self.max_len {
            return false;
        }
        let m = self.input.edges.len();
        let budget = self.span_cap - span.len();
        if budget < 3 {
            let mut cands: Vec<usize> = Vec::new();
            for v in span.iter() {
                for &ei in &self.input.incidence[v] {
                    if ei >= start && !self.member.contains(ei) {
                        cands.push(ei);
                    }
                }
            }
            cands.sort_unstable();
            cands.dedup();
            for &j in &cands {
                let ev = self.input.edges[j].vertex_set();
                if ev.difference_len(&span) > budget {
                    continue;
                }
                added.push(j);
                if self.run(added, span.union(&ev), j + 1) {
                    return true;
                }
                added.pop();
            }
        } else {
            for j in start..m {
                if self.member.contains(j) {
                    continue;
                }
                let ev = self.input.edges[j].vertex_set();
                if ev.difference_len(&span) > budget {
                    continue;
                }
                added.push(j);
                if self.run(added, span.union(&ev), j + 1) {
                    return true;
                }
                added.pop();
            }
        }
        false
    }
}

/// True when `conf` is a valid (l+1,l)-configuration, l in [2,k-1], with no
/// strict (l''+1,l'') super-configuration for l'' in (l, k-1].
pub fn is_k_maximal(h: &Hypergraph, conf: &Configuration, k: usize) -> Result<bool> {
    let span = h.span(&conf.edges)?;
    if conf.ell != conf.edges.len() || span.len() != conf.span_size {
        return Ok(false);
    }
    if !(2..=k - 1).contains(&conf.ell) || conf.span_size > conf.ell + 1 {
        return Ok(false);
    }
    Ok(find_super_configuration(h, conf, k)?.is_none())
}

/// Grows a seed (l+1,l)-configuration to a k-maximal one.
///
/// Greedy absorption follows the three extension moves used in the
/// structural lemma (an edge meeting the span in two or three vertices, a
/// pair of edges with equal outside pairs, a short cycle of the link graph),
/// then an exact bounded enumeration certifies maximality; the certification
/// also repairs anything the greedy phase missed, so the result is exactly
/// k-maximal, not heuristically so. Ties are broken toward the smallest
/// edge indices throughout.
pub fn grow_k_maximal(h: &Hypergraph, seed: &Configuration, k: usize) -> Result<Configuration> {
    if k < 2 {
        return Err(Error::InvalidParams("require k >= 2".into()));
    }
    let mut span = h.span(&seed.edges)?;
    if seed.edges.len() != seed.ell
        || span.len() != seed.span_size
        || !(2..=k.saturating_sub(1)).contains(&seed.ell)
        || seed.span_size > seed.ell + 1
    {
        return Err(Error::InvalidSeed(format!(
            "{} edges spanning {} vertices at k = {k}",
            seed.edges.len(),
            h.span(&seed.edges)?.len(),
        )));
    }
    let mut cur = seed.edges.clone();
    let m = h.edge_count();
    'grow: loop {
        let ell = cur.len();
        debug_assert!(span.len() <= ell + 1);

        // absorb an edge meeting the span in >= 2 vertices (adds <= 1 vertex)
        if ell + 2 <= k {
            for j in 0..m {
                if cur.contains(j) {
                    continue;
                }
                let ev = h.edges()[j].vertex_set();
                if ev.intersection_len(&span) >= 2 {
                    cur.insert(j);
                    span.union_with(&ev);
                    continue 'grow;
                }
            }
        }

        // absorb a pair of edges whose outside pairs coincide (adds 2 vertices)
        if ell + 3 <= k {
            let mut by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for j in 0..m {
                if cur.contains(j) {
                    continue;
                }
                let ev = h.edges()[j].vertex_set();
                if ev.intersection_len(&span) != 1 {
                    continue;
                }
                let outside = ev.difference(&span).to_vec();
                let key = (outside[0], outside[1]);
                if let Some(&first) = by_pair.get(&key) {
                    cur.insert(first);
                    cur.insert(j);
                    span.union_with(&h.edges()[first].vertex_set());
                    span.union_with(&ev);
                    continue 'grow;
                }
                by_pair.insert(key, j);
            }
        }

        // absorb a cycle of length j <= k-1-ell of the link graph
        // (outside pairs are unique here, the pair move above ran first)
        if k >= ell + 4 {
            if let Some(cycle_edges) = short_link_cycle(h, &cur, &span, k - 1 - ell) {
                for j in cycle_edges {
                    span.union_with(&h.edges()[j].vertex_set());
                    cur.insert(j);
                }
                continue 'grow;
            }
        }

        // exact certification; jump to any super-configuration it finds
        let conf = Configuration {
            ell: cur.len(),
            span_size: span.len(),
            edges: cur.clone(),
        };
        match find_super_configuration(h, &conf, k)? {
            Some(bigger) => {
                span = h.span(&bigger.edges)?;
                cur = bigger.edges;
            }
            None => return Ok(conf),
        }
    }
}

/// Shortest cycle of the link graph on V(F) \ span, up to `max_len` edges.
/// Returns the F-edge indices realizing it.
fn short_link_cycle(
    h: &Hypergraph,
    cur: &EdgeIndexSet,
    span: &VertexSet,
    max_len: usize,
) -> Option<Vec<usize>> {
    if max_len < 3 {
        return None;
    }
    // link edge (a,b) -> F-edge index; pairs are unique at this point
    let mut link: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..h.edge_count() {
        if cur.contains(j) {
            continue;
        }
        let ev = h.edges()[j].vertex_set();
        if ev.intersection_len(span) != 1 {
            continue;
        }
        let outside = ev.difference(span).to_vec();
        let (a, b) = (outside[0], outside[1]);
        link.entry((a, b)).or_insert(j);
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    // shortest cycle through each link edge: BFS avoiding the edge itself
    for (&(a, b), &fe) in &link {
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        dist.insert(a, 0);
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            if dist[&u] + 1 > max_len - 1 {
                continue;
            }
            for &w in adj.get(&u).into_iter().flatten() {
                if (u == a && w == b) || (u == b && w == a) {
                    continue; // skip the direct edge
                }
                if !dist.contains_key(&w) {
                    dist.insert(w, dist[&u] + 1);
                    prev.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        if let Some(&d) = dist.get(&b) {
            if d >= 2 && d < max_len {
                let mut verts = vec![b];
                let mut u = b;
                while u != a {
                    u = prev[&u];
                    verts.push(u);
                }
                let mut edges = vec![fe];
                for w in verts.windows(2) {
                    let key = (w[0].min(w[1]), w[0].max(w[1]));
                    edges.push(link[&key]);
                }
                edges.sort_unstable();
                return Some(edges);
            }
        }
    }
    None
}

/// True when every pair of the configuration's edges is linked by a chain of
/// edges sharing at least two vertices. Inclusion-minimal (l+1,l) witnesses
/// have this property; callers assert it on detector output.
pub fn intersection_connected(h: &Hypergraph, conf: &Configuration) -> Result<bool> {
    let members: Vec<usize> = conf.edges.iter().collect();
    if members.len() <= 1 {
        return Ok(true);
    }
    for &i in &members {
        h.edge(i)?;
    }
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let ea = h.edges()[members[a]].vertex_set();
            let eb = h.edges()[members[b]].vertex_set();
            if ea.intersection_len(&eb) >= 2 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let root = find(&mut parent, 0);
    Ok((1..members.len()).all(|i| find(&mut parent, i) == root))
}
