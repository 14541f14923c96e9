//! The hypergraph data model: 3-uniform edges, spans, induced deletion with
//! retrievable relabel maps, and the text/JSON file formats.
//!
//! Values are immutable after construction; every "mutation" builds a new
//! hypergraph. Vertices are `0..n` with `n <= 128`.

mod bitset;

pub use bitset::{EdgeIndexSet, VertexSet, MAX_VERTICES};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A 3-uniform edge, stored as a strictly increasing vertex triple.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge([usize; 3]);

impl Edge {
    /// Builds an edge from three distinct vertex ids, in any order.
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::RepeatedVertex([a, b, c]));
        }
        Ok(Edge(v))
    }

    pub fn vertices(&self) -> [usize; 3] {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0[0] == v || self.0[1] == v || self.0[2] == v
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// The three vertex pairs inside the edge, each as (low, high).
    pub fn pairs(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn max_vertex(&self) -> usize {
        self.0[2]
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// A 3-uniform hypergraph on `n` vertices with an ordered edge list.
///
/// The edge list order is stable under every read-only operation; when
/// `multi_allowed` is false the list contains no repeated triple. A
/// vertex-to-edges incidence index is built once at construction.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Edge>,
    multi_allowed: bool,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.multi_allowed == other.multi_allowed
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .field("multi_allowed", &self.multi_allowed)
            .finish()
    }
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Edge>, multi_allowed: bool) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        for e in &edges {
            if e.max_vertex() >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: e.max_vertex(),
                    n,
                });
            }
        }
        if !multi_allowed {
            let mut sorted = edges.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateEdge(w[0].vertices()));
                }
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for v in e.vertices() {
                incidence[v].push(i);
            }
        }
        Ok(Hypergraph {
            n,
            edges,
            multi_allowed,
            incidence,
        })
    }

    /// Convenience constructor from raw triples.
    pub fn from_triples(n: usize, triples: &[[usize; 3]], multi_allowed: bool) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|t| Edge::new(t[0], t[1], t[2]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, edges, multi_allowed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Result<&Edge> {
        self.edges.get(i).ok_or(Error::InvalidEdgeIndex {
            index: i,
            m: self.edges.len(),
        })
    }

    pub fn multi_allowed(&self) -> bool {
        self.multi_allowed
    }

    /// Indices of the edges containing vertex `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub(crate) fn incidence_lists(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Union of the vertex sets of the selected edges.
    pub fn span(&self, es: &EdgeIndexSet) -> Result<VertexSet> {
        let mut span = VertexSet::new();
        for i in es.iter() {
            span.union_with(&self.edge(i)?.vertex_set());
        }
        Ok(span)
    }

    /// All vertices covered by at least one edge.
    pub fn covered_vertices(&self) -> VertexSet {
        let mut span = VertexSet::new();
        for e in &self.edges {
            span.union_with(&e.vertex_set());
        }
        span
    }

    /// Deletes the vertices in `vs` together with every edge meeting them.
    ///
    /// The remaining vertices are relabeled densely; the returned value
    /// carries both directions of the relabel map plus the map from new edge
    /// indices back to the original ones, so witnesses found downstream can
    /// be pulled back to original labels.
    pub fn delete_vertices(&self, vs: &VertexSet) -> Result<VertexDeletion> {
        if let Some(v) = vs.iter().find(|&v| v >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::with_capacity(self.n - vs.len());
        for (v, slot) in old_to_new.iter_mut().enumerate() {
            if !vs.contains(v) {
                *slot = Some(new_to_old.len());
                new_to_old.push(v);
            }
        }
        let mut edges = Vec::new();
        let mut edge_back = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.vertex_set().is_disjoint(vs) {
                let [a, b, c] = e.vertices();
                edges.push(Edge::new(
                    old_to_new[a].unwrap(),
                    old_to_new[b].unwrap(),
                    old_to_new[c].unwrap(),
                )?);
                edge_back.push(i);
            }
        }
        let hypergraph = Hypergraph::new(new_to_old.len(), edges, self.multi_allowed)?;
        Ok(VertexDeletion {
            hypergraph,
            new_to_old,
            old_to_new,
            edge_back,
        })
    }

    /// A copy with the edge list sorted; the canonical on-disk order.
    pub fn canonicalized(&self) -> Self {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        Hypergraph::new(self.n, edges, self.multi_allowed).expect("relabel-free copy")
    }
}

/// Result of [`Hypergraph::delete_vertices`].
#[derive(Debug, Clone)]
pub struct VertexDeletion {
    pub hypergraph: Hypergraph,
    /// new vertex id -> original vertex id
    pub new_to_old: Vec<usize>,
    /// original vertex id -> new id (None if deleted)
    pub old_to_new: Vec<Option<usize>>,
    /// new edge index -> original edge index
    pub edge_back: Vec<usize>,
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Parses the text format: header `n m [multi]`, then `m` lines of three
/// space-separated vertex ids. Blank lines after the last edge are ignored.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_tok(toks.next(), 1, "vertex count")?;
    let m: usize = parse_tok(toks.next(), 1, "edge count")?;
    let multi = match toks.next() {
        None => false,
        Some("multi") => true,
        Some(other) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header token {other:?}"),
            })
        }
    };
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if edges.len() == m {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("more than {m} edge lines"),
            });
        }
        let mut toks = line.split_whitespace();
        let a = parse_tok(toks.next(), lineno, "vertex id")?;
        let b = parse_tok(toks.next(), lineno, "vertex id")?;
        let c = parse_tok(toks.next(), lineno, "vertex id")?;
        if toks.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: "more than three vertex ids on edge line".into(),
            });
        }
        edges.push(Edge::new(a, b, c)?);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::new(n, edges, multi)
}

fn parse_tok(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

/// Writes the text format. Edges are emitted in the hypergraph's list order;
/// call [`Hypergraph::canonicalized`] first for the canonical form.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    if h.multi_allowed() {
        out.push_str(&format!("{} {} multi\n", h.n(), h.edge_count()));
    } else {
        out.push_str(&format!("{} {}\n", h.n(), h.edge_count()));
    }
    for e in h.edges() {
        let [a, b, c] = e.vertices();
        out.push_str(&format!("{a} {b} {c}\n"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    edges: Vec<[usize; 3]>,
    multi: bool,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphJson {
            n: self.n,
            edges: self.edges.iter().map(|e| e.vertices()).collect(),
            multi: self.multi_allowed,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(de)?;
        Hypergraph::from_triples(raw.n, &raw.edges, raw.multi).map_err(serde::de::Error::custom)
    }
}

/// The 7-point, 7-line projective plane; the canonical linear extremal case.
pub fn fano_plane() -> Hypergraph {
    Hypergraph::from_triples(
        7,
        &[
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ],
        false,
    )
    .expect("valid fano construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn h(triples: &[[usize; 3]]) -> Hypergraph {
        let n = triples.iter().flatten().max().map_or(0, |&m| m + 1);
        Hypergraph::from_triples(n, triples, false).unwrap()
    }

    #[test]
    fn edge_sorts_and_rejects_repeats() {
        assert_eq!(Edge::new(5, 1, 3).unwrap().vertices(), [1, 3, 5]);
        assert!(matches!(Edge::new(1, 1, 2), Err(Error::RepeatedVertex(_))));
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            Hypergraph::from_triples(2, &[[0, 1, 2]], false),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            Hypergraph::from_triples(200, &[], false),
            Err(Error::TooManyVertices { .. })
        ));
        assert!(matches!(
            Hypergraph::from_triples(4, &[[0, 1, 2], [2, 1, 0]], false),
            Err(Error::DuplicateEdge(_))
        ));
        // same triples are fine with the multi flag
        let m = Hypergraph::from_triples(4, &[[0, 1, 2], [2, 1, 0]], true).unwrap();
        assert_eq!(m.edge_count(), 2);
    }

    #[test]
    fn span_examples() {
        let g = Hypergraph::from_triples(124, &[[1, 2, 3]], false).unwrap();
        let es: EdgeIndexSet = [0].into_iter().collect();
        assert_eq!(g.span(&es).unwrap().to_vec(), vec![1, 2, 3]);

        let g = h(&[[0, 1, 2], [0, 1, 3]]);
        let es: EdgeIndexSet = [0, 1].into_iter().collect();
        assert_eq!(g.span(&es).unwrap().to_vec(), vec![0, 1, 2, 3]);

        let g = h(&[[0, 1, 2], [3, 4, 5]]);
        let es: EdgeIndexSet = [0, 1].into_iter().collect();
        assert_eq!(g.span(&es).unwrap().len(), 6);

        let bad: EdgeIndexSet = [7].into_iter().collect();
        assert!(matches!(
            g.span(&bad),
            Err(Error::InvalidEdgeIndex { index: 7, .. })
        ));
    }

    #[test]
    fn delete_vertices_keeps_only_disjoint_edges() {
        let g = h(&[[0, 1, 3], [0, 4, 5], [2, 3, 5]]);
        let vs: VertexSet = [0, 1, 3].into_iter().collect();
        let del = g.delete_vertices(&vs).unwrap();
        // only {2,3,5} avoids... no: {2,3,5} meets 3. Only {0,4,5} and {0,1,3} meet vs;
        // {2,3,5} contains 3 as well, so nothing survives except... recheck by hand:
        // edges meeting {0,1,3}: all three contain 0 or 3. Survivors: none.
        assert_eq!(del.hypergraph.edge_count(), 0);
        assert_eq!(del.hypergraph.n(), 3);
        assert_eq!(del.new_to_old, vec![2, 4, 5]);

        // empty deletion is the identity (with identity maps)
        let del = g.delete_vertices(&VertexSet::new()).unwrap();
        assert_eq!(del.hypergraph, g);
        assert_eq!(del.edge_back, vec![0, 1, 2]);
    }

    #[test]
    fn delete_relabels_densely() {
        let g = h(&[[0, 1, 3], [2, 3, 5], [0, 4, 5]]);
        let vs: VertexSet = [0, 1].into_iter().collect();
        let del = g.delete_vertices(&vs).unwrap();
        // survivor {2,3,5} -> relabeled {0,1,3}
        assert_eq!(del.hypergraph.edge_count(), 1);
        assert_eq!(del.hypergraph.edges()[0].vertices(), [0, 1, 3]);
        assert_eq!(del.edge_back, vec![1]);
        assert_eq!(del.old_to_new[3], Some(1));
    }

    #[test]
    fn fano_line_deletion_kills_all_lines() {
        // every two fano lines meet, so deleting one line's points leaves no edge
        let fano = fano_plane();
        for e in fano.edges() {
            let del = fano.delete_vertices(&e.vertex_set()).unwrap();
            assert_eq!(del.hypergraph.edge_count(), 0);
            assert_eq!(del.hypergraph.n(), 4);
        }
    }

    #[test]
    fn delete_composition_on_random_graphs() {
        let mut rng = SplitMix64::new(0xc0ffee);
        for _ in 0..40 {
            let n = 6 + (rng.next_below(6)) as usize;
            let mut triples = Vec::new();
            for _ in 0..8 {
                let a = rng.next_below(n as u64) as usize;
                let b = rng.next_below(n as u64) as usize;
                let c = rng.next_below(n as u64) as usize;
                if a != b && b != c && a != c {
                    triples.push([a, b, c]);
                }
            }
            let g = match Hypergraph::from_triples(n, &triples, false) {
                Ok(g) => g,
                Err(_) => continue, // random duplicates: skip
            };
            let a: VertexSet = (0..n).filter(|_| rng.next_below(4) == 0).collect();
            let b: VertexSet = (0..n)
                .filter(|v| !a.contains(*v) && rng.next_below(4) == 0)
                .collect();

            // delete(A u B) == delete(delete(A), image of B)
            let ab = a.union(&b);
            let direct = g.delete_vertices(&ab).unwrap().hypergraph;
            let first = g.delete_vertices(&a).unwrap();
            let b_img: VertexSet = b
                .iter()
                .map(|v| first.old_to_new[v].expect("b disjoint from a"))
                .collect();
            let composed = first.hypergraph.delete_vertices(&b_img).unwrap().hypergraph;
            assert_eq!(direct, composed);

            // edge-loss accounting: e(F) - e(F \ vs) = edges meeting vs
            let meeting = g
                .edges()
                .iter()
                .filter(|e| !e.vertex_set().is_disjoint(&ab))
                .count();
            assert_eq!(g.edge_count() - direct.edge_count(), meeting);
        }
    }

    #[test]
    fn span_monotone_on_random_graphs() {
        let mut rng = SplitMix64::new(7);
        let g = h(&[[0, 1, 2], [1, 2, 3], [3, 4, 5], [0, 4, 5], [2, 4, 6]]);
        for _ in 0..50 {
            let es2: EdgeIndexSet = (0..g.edge_count())
                .filter(|_| rng.next_below(2) == 0)
                .collect();
            let es1: EdgeIndexSet = es2.iter().filter(|_| rng.next_below(2) == 0).collect();
            assert!(g.span(&es1).unwrap().is_subset(&g.span(&es2).unwrap()));
        }
    }

    #[test]
    fn text_round_trip() {
        let text = "7 3\n0 1 2\n0 1 3\n4 5 6\n";
        let g = read_hypergraph(text).unwrap();
        assert_eq!(g.n(), 7);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(write_hypergraph(&g), text);

        let fano = fano_plane().canonicalized();
        assert_eq!(read_hypergraph(&write_hypergraph(&fano)).unwrap(), fano);
    }

    #[test]
    fn text_format_errors() {
        assert!(read_hypergraph("3 1\n0 1 2\n0 1 2\n").is_err()); // m mismatch
        assert!(matches!(
            read_hypergraph("3 2\n0 1 2\n0 2 1\n"),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(read_hypergraph("3 2 multi\n0 1 2\n0 2 1\n").is_ok());
        assert!(matches!(
            read_hypergraph("3 1\n0 1 5\n"),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            read_hypergraph("3 1\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_hypergraph("x 1\n0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = Hypergraph::from_triples(5, &[[0, 1, 2], [0, 1, 2], [2, 3, 4]], true).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        let back: Hypergraph = serde_json::from_str(&js).unwrap();
        assert_eq!(back, g);
        // duplicate edges without the flag must fail to deserialize
        let bad = r#"{"n":4,"edges":[[0,1,2],[0,1,2]],"multi":false}"#;
        assert!(serde_json::from_str::<Hypergraph>(bad).is_err());
    }
}
