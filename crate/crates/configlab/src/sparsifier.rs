//! Structural instrumentation of k-maximal configurations and the iterated
//! extraction that produces g-free subgraphs.
//!
//! Every quantity the structural lemma speaks about is recomputed here and
//! checked exactly: the E1/E2/E3 edge partition, the link graph on the
//! complement of the span (a forest with bounded components), the per-step
//! edge-loss inequality, and the aggregate quadratic loss bound. These are
//! theorems, so a failed check is a bug in the caller or in this crate; we
//! fail loudly with the witness instead of continuing.

use crate::configs::{self, Configuration};
use crate::hypercore::{EdgeIndexSet, Hypergraph, VertexSet};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Edges meeting the span of S in exactly 1, 2, and 3 vertices.
///
/// E3 contains the configuration's own edges; together the three sets are
/// exactly the edges lost when the span is deleted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePartition {
    pub e1: EdgeIndexSet,
    pub e2: EdgeIndexSet,
    pub e3: EdgeIndexSet,
}

impl EdgePartition {
    pub fn build(h: &Hypergraph, span: &VertexSet) -> Self {
        let mut e1 = EdgeIndexSet::new();
        let mut e2 = EdgeIndexSet::new();
        let mut e3 = EdgeIndexSet::new();
        for (i, e) in h.edges().iter().enumerate() {
            match e.vertex_set().intersection_len(span) {
                0 => {}
                1 => e1.insert(i),
                2 => e2.insert(i),
                _ => e3.insert(i),
            }
        }
        EdgePartition { e1, e2, e3 }
    }

    /// Total number of edges meeting the span.
    pub fn total(&self) -> usize {
        self.e1.len() + self.e2.len() + self.e3.len()
    }
}

/// The graph H on V(F) \ V(S) whose edges are the outside pairs of the
/// E1 edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub vertices: Vec<usize>,
    /// Deduplicated outside pairs, each as (low, high).
    pub edges: Vec<(usize, usize)>,
    /// Number of E1 edges; equals `edges.len()` exactly when no two E1
    /// edges share their outside pair.
    pub e1_count: usize,
}

impl LinkGraph {
    pub fn build(h: &Hypergraph, span: &VertexSet) -> Self {
        let vertices: Vec<usize> = (0..h.n()).filter(|&v| !span.contains(v)).collect();
        let mut edges = Vec::new();
        let mut e1_count = 0;
        for e in h.edges() {
            let ev = e.vertex_set();
            if ev.intersection_len(span) == 1 {
                e1_count += 1;
                let outside = ev.difference(span).to_vec();
                edges.push((outside[0], outside[1]));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        LinkGraph {
            vertices,
            edges,
            e1_count,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Component vertex counts, isolated vertices included, plus a forest
    /// flag (false as soon as any cycle closes).
    pub fn component_sizes(&self) -> (Vec<usize>, bool) {
        let index: std::collections::BTreeMap<usize, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        let mut is_forest = true;
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            if ra == rb {
                is_forest = false;
            } else {
                parent[ra] = rb;
            }
        }
        let mut sizes = std::collections::BTreeMap::new();
        for i in 0..self.vertices.len() {
            *sizes.entry(find(&mut parent, i)).or_insert(0usize) += 1;
        }
        (sizes.into_values().collect(), is_forest)
    }

    pub fn is_forest(&self) -> bool {
        self.component_sizes().1
    }

    pub fn max_component_size(&self) -> usize {
        self.component_sizes().0.into_iter().max().unwrap_or(0)
    }
}

/// The four conclusions of the structural lemma, each checked exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralVerdicts {
    /// (1) at most k-1 edges lie inside the span
    pub e3_bounded: bool,
    /// (2) no edge meets the span in exactly two vertices
    pub e2_empty: bool,
    /// (3) no two E1 edges share their outside pair
    pub outside_pairs_unique: bool,
    /// (4) the link graph is a forest with components of at most k-l vertices
    pub link_forest_bounded: bool,
}

impl StructuralVerdicts {
    pub fn all(&self) -> bool {
        self.e3_bounded && self.e2_empty && self.outside_pairs_unique && self.link_forest_bounded
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralReport {
    pub k: usize,
    pub ell: usize,
    pub partition: EdgePartition,
    pub link: LinkGraph,
    pub link_is_forest: bool,
    pub link_max_component: usize,
    pub verdicts: StructuralVerdicts,
}

/// Builds the edge partition and link graph for a certified k-maximal
/// configuration and evaluates the lemma's four conclusions.
///
/// The preconditions are re-checked from scratch: the hypergraph must be
/// (k+2,k)-free and S must be a k-maximal (l+1,l)-configuration (certified
/// through the configs detector, not trusted from the caller).
pub fn structural_checks(
    h: &Hypergraph,
    s_conf: &Configuration,
    k: usize,
) -> Result<StructuralReport> {
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
    let span = h.span(&s_conf.edges)?;
    let ell = s_conf.edges.len();
    if s_conf.ell != ell
        || s_conf.span_size != span.len()
        || !(2..=k - 1).contains(&ell)
        || span.len() > ell + 1
    {
        return Err(Error::InvalidSeed(format!(
            "{} edges spanning {} vertices at k = {k}",
            ell,
            span.len()
        )));
    }
    if let Some(extension) = configs::find_super_configuration(h, s_conf, k)? {
        return Err(Error::NotKMaximal { k, extension });
    }

    let partition = EdgePartition::build(h, &span);
    let link = LinkGraph::build(h, &span);
    let (sizes, is_forest) = link.component_sizes();
    let max_component = sizes.iter().copied().max().unwrap_or(0);
    let verdicts = StructuralVerdicts {
        e3_bounded: partition.e3.len() < k,
        e2_empty: partition.e2.is_empty(),
        outside_pairs_unique: partition.e1.len() == link.edge_count(),
        link_forest_bounded: is_forest && max_component <= k - ell,
    };
    Ok(StructuralReport {
        k,
        ell,
        partition,
        link,
        link_is_forest: is_forest,
        link_max_component: max_component,
        verdicts,
    })
}

/// One deletion step of the extraction, in original labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionStep {
    pub step: usize,
    pub ell: usize,
    /// Edge indices of the k-maximal configuration, in the input labeling.
    pub config_edges: Vec<usize>,
    /// Vertices deleted this step, in the input labeling.
    pub span_vertices: Vec<usize>,
    pub e1: usize,
    pub e2: usize,
    pub e3: usize,
    pub link_edges: usize,
    pub link_is_forest: bool,
    pub link_max_component: usize,
    pub edge_loss: usize,
    pub v_before: usize,
    pub e_before: usize,
    pub v_after: usize,
    pub e_after: usize,
    /// k * loss <= (k-1)(v - v(S)) + k(k-1), both sides scaled by k.
    pub step_bound_lhs: u64,
    pub step_bound_rhs: u64,
    pub step_bound_holds: bool,
}

/// Full record of an extraction run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub k: usize,
    pub v_initial: usize,
    pub e_initial: usize,
    pub v_final: usize,
    pub e_final: usize,
    pub steps: Vec<ExtractionStep>,
    /// 6k (e - e') <= (k-1)(v - v')(v + v' + 2k), both sides scaled by 6k.
    pub aggregate_lhs: u64,
    pub aggregate_rhs: u64,
    pub aggregate_holds: bool,
}

impl ExtractionTrace {
    /// One JSON object per step, then one summary object, one per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("step serializes"));
            out.push('\n');
        }
        let summary = serde_json::json!({
            "summary": {
                "k": self.k,
                "v_initial": self.v_initial,
                "e_initial": self.e_initial,
                "v_final": self.v_final,
                "e_final": self.e_final,
                "steps": self.steps.len(),
                "aggregate_lhs": self.aggregate_lhs,
                "aggregate_rhs": self.aggregate_rhs,
                "aggregate_holds": self.aggregate_holds,
            }
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

/// Iterated extraction: find a smallest-level (l+1,l)-configuration, grow it
/// to a k-maximal one, delete its span, repeat until the remainder is g-free.
///
/// The structural conclusions and the per-step loss inequality are asserted
/// on every step, and the aggregate quadratic bound on the whole run; all
/// comparisons are exact integer arithmetic (scaled by k and 6k).
pub fn extract_free_subgraph(h: &Hypergraph, k: usize) -> Result<(Hypergraph, ExtractionTrace)> {
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
    let mut cur = h.clone();
    let mut vertex_back: Vec<usize> = (0..h.n()).collect();
    let mut edge_back: Vec<usize> = (0..h.edge_count()).collect();
    let mut steps: Vec<ExtractionStep> = Vec::new();

    while let Some(seed) = configs::g_violation(&cur, k) {
        let s_conf = configs::grow_k_maximal(&cur, &seed, k)?;
        let report = structural_checks(&cur, &s_conf, k)?;
        if !report.verdicts.all() {
            return Err(Error::StructuralViolation(format!(
                "lemma conclusions failed at step {}: {:?} for configuration {:?}",
                steps.len(),
                report.verdicts,
                s_conf
            )));
        }
        let span = cur.span(&s_conf.edges)?;
        let deletion = cur.delete_vertices(&span)?;
        let next = deletion.hypergraph;
        let loss = cur.edge_count() - next.edge_count();
        if loss != report.partition.total() {
            return Err(Error::StructuralViolation(format!(
                "edge-loss bookkeeping mismatch: deleted {loss}, partition holds {}",
                report.partition.total()
            )));
        }
        let lhs = k as u64 * loss as u64;
        let rhs = (k as u64 - 1) * (cur.n() - span.len()) as u64 + k as u64 * (k as u64 - 1);
        if lhs > rhs {
            return Err(Error::BoundViolation(format!(
                "per-step loss bound failed at step {}: k*loss = {lhs} > {rhs}",
                steps.len()
            )));
        }
        steps.push(ExtractionStep {
            step: steps.len(),
            ell: s_conf.ell,
            config_edges: s_conf.edges.iter().map(|i| edge_back[i]).collect(),
            span_vertices: span.iter().map(|v| vertex_back[v]).collect(),
            e1: report.partition.e1.len(),
            e2: report.partition.e2.len(),
            e3: report.partition.e3.len(),
            link_edges: report.link.edge_count(),
            link_is_forest: report.link_is_forest,
            link_max_component: report.link_max_component,
            edge_loss: loss,
            v_before: cur.n(),
            e_before: cur.edge_count(),
            v_after: next.n(),
            e_after: next.edge_count(),
            step_bound_lhs: lhs,
            step_bound_rhs: rhs,
            step_bound_holds: lhs <= rhs,
        });
        vertex_back = deletion
            .new_to_old
            .iter()
            .map(|&v| vertex_back[v])
            .collect();
        edge_back = deletion.edge_back.iter().map(|&e| edge_back[e]).collect();
        cur = next;
    }

    if !configs::is_g_free(&cur, k) {
        return Err(Error::StructuralViolation(
            "extraction terminated on a non-g-free hypergraph".into(),
        ));
    }
    let lost: usize = steps.iter().map(|s| s.edge_loss).sum();
    if lost != h.edge_count() - cur.edge_count() {
        return Err(Error::StructuralViolation(
            "sum of per-step losses differs from total edge loss".into(),
        ));
    }
    let (v, vp) = (h.n() as u64, cur.n() as u64);
    let (e, ep) = (h.edge_count() as u64, cur.edge_count() as u64);
    let aggregate_lhs = 6 * k as u64 * (e - ep);
    let aggregate_rhs = (k as u64 - 1) * (v - vp) * (v + vp + 2 * k as u64);
    if aggregate_lhs > aggregate_rhs {
        return Err(Error::BoundViolation(format!(
            "aggregate loss bound failed: 6k(e-e') = {aggregate_lhs} > {aggregate_rhs}"
        )));
    }
    let trace = ExtractionTrace {
        k,
        v_initial: h.n(),
        e_initial: h.edge_count(),
        v_final: cur.n(),
        e_final: cur.edge_count(),
        steps,
        aggregate_lhs,
        aggregate_rhs,
        aggregate_holds: true,
    };
    Ok((cur, trace))
}

/// Certificate for the conditional dense-subgraph guarantee.
///
/// Hypotheses: v >= 8k^2 and e >= (1/6)(1 - 1/(2k)) v^2, checked as
/// 12k e >= (2k-1) v^2. Conclusions, asserted only when the hypotheses hold:
/// v' >= v / sqrt(4k), checked as 4k v'^2 >= v^2, and e'/v'^2 >= e/v^2,
/// checked as e' v^2 >= e v'^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseCertificate {
    pub k: usize,
    pub v_original: usize,
    pub e_original: usize,
    pub v_extracted: usize,
    pub e_extracted: usize,
    pub hypothesis_vertices: bool,
    pub hypothesis_density: bool,
    pub hypotheses_met: bool,
    /// Equal to `hypotheses_met`: the conclusions below are only claimed
    /// as theorems when this is true.
    pub conclusions_asserted: bool,
    pub vertex_lhs: u64,
    pub vertex_rhs: u64,
    pub vertex_holds: bool,
    pub density_lhs: u64,
    pub density_rhs: u64,
    pub density_holds: bool,
}

/// Runs the extraction and certifies the dense-subgraph conclusions.
///
/// When the hypotheses are unmet the extraction still runs and the raw
/// numbers are recorded, but the certificate is flagged and nothing is
/// asserted.
pub fn dense_extract_with_certificate(
    h: &Hypergraph,
    k: usize,
) -> Result<(Hypergraph, DenseCertificate)> {
    let (extracted, _trace) = extract_free_subgraph(h, k)?;
    let (v, e) = (h.n() as u64, h.edge_count() as u64);
    let (vp, ep) = (extracted.n() as u64, extracted.edge_count() as u64);
    let hypothesis_vertices = v >= 8 * (k as u64) * (k as u64);
    let hypothesis_density = 12 * k as u64 * e >= (2 * k as u64 - 1) * v * v;
    let hypotheses_met = hypothesis_vertices && hypothesis_density;
    let cert = DenseCertificate {
        k,
        v_original: h.n(),
        e_original: h.edge_count(),
        v_extracted: extracted.n(),
        e_extracted: extracted.edge_count(),
        hypothesis_vertices,
        hypothesis_density,
        hypotheses_met,
        conclusions_asserted: hypotheses_met,
        vertex_lhs: 4 * k as u64 * vp * vp,
        vertex_rhs: v * v,
        vertex_holds: 4 * k as u64 * vp * vp >= v * v,
        density_lhs: ep * v * v,
        density_rhs: e * vp * vp,
        density_holds: ep * v * v >= e * vp * vp,
    };
    if hypotheses_met && !(cert.vertex_holds && cert.density_holds) {
        return Err(Error::BoundViolation(format!(
            "dense-subgraph conclusions failed under met hypotheses: {cert:?}"
        )));
    }
    Ok((extracted, cert))
}
