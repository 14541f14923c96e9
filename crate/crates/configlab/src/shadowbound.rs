//! Intersection-graph and 2-shadow machinery: exact component counting
//! claims and the shadow-disjointness edge bound.
//!
//! The intersection graph has one vertex per edge of F, adjacent when two
//! edges share at least two vertices. On a g-free hypergraph every connected
//! subgraph T of it spans exactly v(T)+2 vertices and shadows exactly
//! 2 v(T)+1 pairs, distinct components have disjoint shadows, and the edge
//! count obeys e <= (k-1)/(2k-1) * C(v,2). All comparisons are exact integer
//! arithmetic; the equality cases (the 7-point plane) must not depend on
//! rounding.

use crate::configs;
use crate::hypercore::{EdgeIndexSet, Hypergraph};
use crate::rng::SplitMix64;
use crate::{gcd, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Graph on the edge indices of F; adjacency = sharing >= 2 vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionGraph {
    /// Sorted neighbor lists, one per edge of F.
    pub adjacency: Vec<Vec<usize>>,
    /// Connected components as sorted member lists, ordered by minimum.
    pub components: Vec<Vec<usize>>,
}

pub fn build_intersection_graph(h: &Hypergraph) -> IntersectionGraph {
    let m = h.edge_count();
    // bucket edges by contained pair; two triples share >= 2 vertices
    // exactly when they share a pair
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        for p in e.pairs() {
            buckets.entry(p).or_default().push(i);
        }
    }
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for members in buckets.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
    }
    let adjacency: Vec<Vec<usize>> = adjacency
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let mut seen = vec![false; m];
    let mut components = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    IntersectionGraph {
        adjacency,
        components,
    }
}

/// The set of vertex pairs covered by a set of edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shadow2 {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl Shadow2 {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.pairs.is_disjoint(&other.pairs)
    }
}

/// All pairs contained in some edge of Y.
pub fn two_shadow(h: &Hypergraph, y: &EdgeIndexSet) -> Result<Shadow2> {
    let mut pairs = BTreeSet::new();
    for i in y.iter() {
        for p in h.edge(i)?.pairs() {
            pairs.insert(p);
        }
    }
    Ok(Shadow2 { pairs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStat {
    /// v(T): number of F-edges in the component.
    pub size: usize,
    /// Vertices of F spanned by the component's edges; must equal size + 2.
    pub span: usize,
    /// 2-shadow cardinality; must equal 2*size + 1.
    pub shadow: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub components: Vec<ComponentStat>,
    pub total_shadow: usize,
    pub shadows_disjoint: bool,
    pub max_component_size: usize,
}

/// Checks the exact counting claims on every intersection-graph component of
/// a g-free hypergraph: size <= k-1, span = size+2, shadow = 2*size+1, and
/// pairwise disjoint shadows. The size bound is certified twice: once from
/// the component partition and once through the configuration detector.
pub fn verify_component_claims(h: &Hypergraph, k: usize) -> Result<ComponentReport> {
    require_g_free(h, k)?;
    let ig = build_intersection_graph(h);
    let mut stats = Vec::new();
    let mut union_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut total = 0usize;
    for comp in &ig.components {
        let set: EdgeIndexSet = comp.iter().copied().collect();
        let span = h.span(&set)?.len();
        let shadow = two_shadow(h, &set)?;
        let stat = ComponentStat {
            size: comp.len(),
            span,
            shadow: shadow.len(),
        };
        if stat.size > k - 1 {
            return Err(Error::StructuralViolation(format!(
                "component {comp:?} has {} edges, exceeding k-1 = {}",
                stat.size,
                k - 1
            )));
        }
        if stat.span != stat.size + 2 {
            return Err(Error::StructuralViolation(format!(
                "component {comp:?} spans {} vertices, expected {}",
                stat.span,
                stat.size + 2
            )));
        }
        if stat.shadow != 2 * stat.size + 1 {
            return Err(Error::StructuralViolation(format!(
                "component {comp:?} shadows {} pairs, expected {}",
                stat.shadow,
                2 * stat.size + 1
            )));
        }
        total += shadow.len();
        union_pairs.extend(shadow.pairs.iter().copied());
        stats.push(stat);
    }
    let disjoint = union_pairs.len() == total;
    if !disjoint {
        return Err(Error::StructuralViolation(
            "component shadows are not pairwise disjoint".into(),
        ));
    }
    // independent certification of the size bound: a component of k edges
    // would contain a (k+2,k)-configuration, which the detector must refute
    if configs::find_configuration(h, k + 2, k).is_some() {
        return Err(Error::StructuralViolation(
            "detector found a (k+2,k)-configuration after the partition passed".into(),
        ));
    }
    Ok(ComponentReport {
        max_component_size: stats.iter().map(|s| s.size).max().unwrap_or(0),
        components: stats,
        total_shadow: total,
        shadows_disjoint: disjoint,
    })
}

/// Exact rational bound e <= (k-1)/(2k-1) * C(v,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBound {
    pub bound_num: u64,
    pub bound_den: u64,
    pub holds: bool,
}

/// Computes the bound exactly and verifies e(h) against it by
/// cross-multiplication: 2(2k-1) e <= (k-1) v (v-1).
pub fn edge_bound_check(h: &Hypergraph, k: usize) -> Result<EdgeBound> {
    require_g_free(h, k)?;
    Ok(edge_bound_raw(h, k))
}

fn edge_bound_raw(h: &Hypergraph, k: usize) -> EdgeBound {
    let v = h.n() as u64;
    let e = h.edge_count() as u64;
    let kk = k as u64;
    let num = (kk - 1) * v * v.saturating_sub(1);
    let den = 2 * (2 * kk - 1);
    let g = gcd(num.max(1), den);
    EdgeBound {
        bound_num: num / g,
        bound_den: den / g,
        holds: 2 * (2 * kk - 1) * e <= (kk - 1) * v * v.saturating_sub(1),
    }
}

/// The finite-n consequence e <= (k-1)/(4k-2) * v^2, exact.
pub fn theorem_bound_holds(h: &Hypergraph, k: usize) -> bool {
    let v = h.n() as u64;
    let e = h.edge_count() as u64;
    let kk = k as u64;
    (4 * kk - 2) * e <= (kk - 1) * v * v
}

/// Combined report in the shape the CLI emits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub components: Vec<ComponentStat>,
    pub total_shadow: usize,
    pub shadows_disjoint: bool,
    pub bound_num: u64,
    pub bound_den: u64,
    pub holds: bool,
}

pub fn shadow_report(h: &Hypergraph, k: usize) -> Result<ShadowReport> {
    let claims = verify_component_claims(h, k)?;
    let bound = edge_bound_check(h, k)?;
    Ok(ShadowReport {
        components: claims.components,
        total_shadow: claims.total_shadow,
        shadows_disjoint: claims.shadows_disjoint,
        bound_num: bound.bound_num,
        bound_den: bound.bound_den,
        holds: bound.holds,
    })
}

fn require_g_free(h: &Hypergraph, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParams("require k >= 2".into()));
    }
    if let Some(witness) = configs::find_configuration(h, k + 2, k) {
        return Err(Error::NotFree {
            s: k + 2,
            k,
            witness,
        });
    }
    if let Some(witness) = configs::g_violation(h, k) {
        let s = witness.ell + 1;
        let ell = witness.ell;
        return Err(Error::NotFree { s, k: ell, witness });
    }
    Ok(())
}

/// A random connected subset of the given component, grown by seeded BFS;
/// the counting claims hold for every connected subgraph, not just whole
/// components, and the verification suites sample them through this.
pub fn sample_connected_subgraph(
    ig: &IntersectionGraph,
    component: &[usize],
    size: usize,
    seed: u64,
) -> Vec<usize> {
    assert!(!component.is_empty());
    let size = size.clamp(1, component.len());
    let mut rng = SplitMix64::new(seed);
    let start = component[rng.next_below(component.len() as u64) as usize];
    let mut chosen: BTreeSet<usize> = BTreeSet::from([start]);
    let mut frontier: BTreeSet<usize> = ig.adjacency[start].iter().copied().collect();
    while chosen.len() < size {
        let cands: Vec<usize> = frontier.iter().copied().collect();
        debug_assert!(!cands.is_empty(), "component disconnected?");
        let pick = cands[rng.next_below(cands.len() as u64) as usize];
        chosen.insert(pick);
        frontier.remove(&pick);
        for &w in &ig.adjacency[pick] {
            if !chosen.contains(&w) {
                frontier.insert(w);
            }
        }
    }
    chosen.into_iter().collect()
}
