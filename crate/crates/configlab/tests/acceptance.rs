//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Criteria 3-8 share a deterministic corpus of (k+2,k)-free instances for
//! k in {3,4,5} with n in [10,40]. Random greedy instances alone are almost
//! always already g-free at these sizes, so a third of the corpus carries a
//! planted dense cluster (a repeated edge at k = 3, a 3-edges-on-4-vertices
//! cluster at k = 4 and 5) that forces the extraction machinery through
//! genuine deletion steps.

use configlab::configs;
use configlab::extremal::{
    bose_steiner_triple_system, compute_f, compute_g, gen_random_free, ratio_table, FreeMode,
    SearchConfig,
};
use configlab::hypercore::{fano_plane, Edge, Hypergraph};
use configlab::naive::{self, NaiveMode};
use configlab::shadowbound::{
    self, build_intersection_graph, edge_bound_check, sample_connected_subgraph, two_shadow,
    verify_component_claims,
};
use configlab::sparsifier::{
    dense_extract_with_certificate, extract_free_subgraph, ExtractionTrace,
};
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// shared corpus
// ---------------------------------------------------------------------------

const INSTANCES_PER_K: usize = 200;

struct Instance {
    k: usize,
    name: String,
    input: Hypergraph,
    extracted: Hypergraph,
    trace: ExtractionTrace,
}

struct Corpus {
    instances: Vec<Instance>,
}

/// Deterministic xorshift-free counter-based seeds: instance i of level k.
fn instance_seed(k: usize, i: usize) -> u64 {
    (k as u64) * 1_000_003 + (i as u64) * 7919 + 42
}

fn planted_instance(n: usize, k: usize, seed: u64) -> Hypergraph {
    for attempt in 0..5 {
        let seed = seed + attempt * 10_000;
        let h = match k {
            3 => {
                // a repeated edge is the only (3,2)-configuration shape;
                // the rest lives on disjoint vertices
                let rest = gen_random_free(n - 3, 3, FreeMode::F, seed).unwrap();
                let mut edges = vec![Edge::new(0, 1, 2).unwrap(), Edge::new(0, 1, 2).unwrap()];
                for e in rest.edges() {
                    let [a, b, c] = e.vertices();
                    edges.push(Edge::new(a + 3, b + 3, c + 3).unwrap());
                }
                Hypergraph::new(n, edges, true).unwrap()
            }
            _ => {
                // three edges on four vertices: an (l+1,l)-configuration at
                // l = 3, isolated from the rest of the instance
                let rest = gen_random_free(n - 4, k, FreeMode::F, seed).unwrap();
                let mut edges = vec![
                    Edge::new(0, 1, 2).unwrap(),
                    Edge::new(0, 1, 3).unwrap(),
                    Edge::new(0, 2, 3).unwrap(),
                ];
                for e in rest.edges() {
                    let [a, b, c] = e.vertices();
                    edges.push(Edge::new(a + 4, b + 4, c + 4).unwrap());
                }
                Hypergraph::new(n, edges, false).unwrap()
            }
        };
        if configs::is_f_free(&h, k) {
            assert!(
                configs::g_violation(&h, k).is_some(),
                "planted cluster should be a g violation"
            );
            return h;
        }
    }
    panic!("planting failed to produce an f-free instance");
}

fn build_corpus() -> Corpus {
    let mut instances = Vec::new();
    for k in [3usize, 4, 5] {
        for i in 0..INSTANCES_PER_K {
            let seed = instance_seed(k, i);
            // n spread deterministically over [10, 40]
            let n = 10 + (i * 31 / INSTANCES_PER_K).min(30);
            let (input, name) = if i % 3 == 2 {
                (
                    planted_instance(n, k, seed),
                    format!("k{k}/planted[{i}] n={n}"),
                )
            } else {
                (
                    gen_random_free(n, k, FreeMode::F, seed).unwrap(),
                    format!("k{k}/greedy[{i}] n={n}"),
                )
            };
            assert!(
                configs::is_f_free(&input, k),
                "{name}: corpus input not f-free"
            );
            let (extracted, trace) = extract_free_subgraph(&input, k)
                .unwrap_or_else(|e| panic!("{name}: extraction failed: {e}"));
            instances.push(Instance {
                k,
                name,
                input,
                extracted,
                trace,
            });
        }
    }
    Corpus { instances }
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(build_corpus)
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_exact_small_extremal_values() {
    let cfg = SearchConfig::default();
    let mut results = Vec::new();
    for n in 3..=9 {
        let record = compute_f(n, 4, 2, &cfg).unwrap();
        assert!(record.exact, "f({n};4,2) must certify exactness");
        results.push((n, record.value));
    }
    // independent naive-enumeration oracle for n <= 6
    for &(n, value) in results.iter().take_while(|(n, _)| *n <= 6) {
        let (oracle, _) = naive::max_free_naive(n, NaiveMode::F { s: 4, k: 2 });
        assert_eq!(value, oracle, "f({n};4,2) disagrees with the naive oracle");
    }
    // packing-formula cross-check for n = 7..9 (derived; oracle is ground truth)
    for &(n, value) in results.iter().filter(|(n, _)| *n >= 7) {
        assert_eq!(
            value,
            naive::packing_number_formula(n),
            "f({n};4,2) disagrees with the packing formula"
        );
    }
    assert_eq!(
        results,
        vec![(3, 1), (4, 1), (5, 2), (6, 4), (7, 7), (8, 8), (9, 12)]
    );
    println!("criterion 01 (exact small extremal values, oracle-certified): PASS");
}

#[test]
fn criterion_02_fano_equality() {
    let fano = fano_plane();
    let bound = edge_bound_check(&fano, 2).unwrap();
    assert!(bound.holds);
    assert_eq!((bound.bound_num, bound.bound_den), (7, 1));
    assert_eq!(fano.edge_count(), 7);
    // equality in exact cross-multiplied arithmetic: 2(2k-1) e = (k-1) v (v-1)
    let (v, e, k) = (7u64, 7u64, 2u64);
    assert_eq!(2 * (2 * k - 1) * e, (k - 1) * v * (v - 1));
    println!("criterion 02 (k=2 bound holds with equality on the 7-point plane): PASS");
}

#[test]
fn criterion_03_extraction_soundness() {
    let corpus = corpus();
    for k in [3, 4, 5] {
        let count = corpus.instances.iter().filter(|i| i.k == k).count();
        assert!(count >= INSTANCES_PER_K, "need >= 200 instances at k = {k}");
    }
    let mut checked = 0;
    for inst in &corpus.instances {
        assert!(
            configs::is_g_free(&inst.extracted, inst.k),
            "{}: extraction output fails the independent g detector",
            inst.name
        );
        checked += 1;
    }
    assert_eq!(checked, 3 * INSTANCES_PER_K);
    println!("criterion 03 (extraction soundness on {checked} instances, 100%): PASS");
}

#[test]
fn criterion_04_structural_conclusions_every_step() {
    // structural_checks runs inside every extraction step and extraction
    // errors loudly on any false verdict, so reaching here already means
    // 100%; the per-step trace data is re-asserted independently.
    let corpus = corpus();
    let mut steps = 0;
    for inst in &corpus.instances {
        let k = inst.k as u64;
        for step in &inst.trace.steps {
            assert!(
                step.link_is_forest,
                "{}: link graph not a forest",
                inst.name
            );
            assert!(
                step.link_max_component <= inst.k - step.ell,
                "{}: link component exceeds k - l",
                inst.name
            );
            assert_eq!(step.e2, 0, "{}: E2 not empty", inst.name);
            assert!(step.e3 < inst.k, "{}: E3 exceeds k-1", inst.name);
            assert_eq!(
                step.e1 + step.e2 + step.e3,
                step.edge_loss,
                "{}: loss bookkeeping",
                inst.name
            );
            // per-step loss inequality, exact rational comparison (scaled by k)
            let lhs = k * step.edge_loss as u64;
            let rhs = (k - 1) * (step.v_before - step.span_vertices.len()) as u64 + k * (k - 1);
            assert!(lhs <= rhs, "{}: per-step loss bound", inst.name);
            assert!(step.step_bound_holds);
            steps += 1;
        }
    }
    assert!(
        steps >= 100,
        "corpus exercised too few extraction steps: {steps}"
    );
    println!("criterion 04 (structural conclusions (1)-(4) + per-step loss bound on {steps} steps, 100%): PASS");
}

#[test]
fn criterion_05_aggregate_loss_bound() {
    let corpus = corpus();
    for inst in &corpus.instances {
        let t = &inst.trace;
        assert!(t.aggregate_holds, "{}: aggregate flag", inst.name);
        // recompute both sides exactly: 6k(e-e') <= (k-1)(v-v')(v+v'+2k)
        let k = inst.k as u64;
        let (v, vp) = (t.v_initial as u64, t.v_final as u64);
        let (e, ep) = (t.e_initial as u64, t.e_final as u64);
        assert!(
            6 * k * (e - ep) <= (k - 1) * (v - vp) * (v + vp + 2 * k),
            "{}: aggregate loss bound",
            inst.name
        );
    }
    println!(
        "criterion 05 (aggregate loss bound on {} runs, exact rational): PASS",
        corpus.instances.len()
    );
}

#[test]
fn criterion_06_shadow_exactness() {
    let corpus = corpus();
    let mut samples = 0usize;
    let mut graphs = 0usize;
    for inst in &corpus.instances {
        let h = &inst.extracted;
        // whole components: exact claims plus pairwise disjoint shadows
        let report = verify_component_claims(h, inst.k)
            .unwrap_or_else(|e| panic!("{}: component claims failed: {e}", inst.name));
        assert!(report.shadows_disjoint);
        // sampled connected subgraphs of every component
        let ig = build_intersection_graph(h);
        for (ci, comp) in ig.components.iter().enumerate() {
            let seed = instance_seed(inst.k, ci) ^ 0x51ad0;
            let size = 1 + (seed as usize % comp.len());
            let sub = sample_connected_subgraph(&ig, comp, size, seed);
            let set = sub.iter().copied().collect();
            let span = h.span(&set).unwrap().len();
            let shadow = two_shadow(h, &set).unwrap().len();
            assert_eq!(span, sub.len() + 2, "{}: sampled span", inst.name);
            assert_eq!(shadow, 2 * sub.len() + 1, "{}: sampled shadow", inst.name);
            samples += 1;
        }
        graphs += 1;
    }
    assert!(samples >= 1000, "need >= 1000 samples, got {samples}");
    println!("criterion 06 (shadow exactness: {samples} sampled connected subgraphs over {graphs} graphs): PASS");
}

#[test]
fn criterion_07_finite_theorem_bound() {
    let cfg = SearchConfig::default();
    // every computed g value
    for k in [2usize, 3, 4] {
        for n in 3..=7 {
            let record = compute_g(n, k, &cfg).unwrap();
            let (v, e, kk) = (n as u64, record.value as u64, k as u64);
            assert!(
                (4 * kk - 2) * e <= (kk - 1) * v * v,
                "g({n},{k}) breaks the finite-n bound"
            );
            assert!(shadowbound::theorem_bound_holds(&record.witness, k));
        }
    }
    // every g-free corpus graph
    let corpus = corpus();
    for inst in &corpus.instances {
        assert!(
            shadowbound::theorem_bound_holds(&inst.extracted, inst.k),
            "{}: finite-n bound",
            inst.name
        );
    }
    println!("criterion 07 (finite-n bound e <= (k-1)/(4k-2) v^2, exact): PASS");
}

#[test]
fn criterion_08_conditional_dense_lemma() {
    let corpus = corpus();
    let mut met = [0usize; 6]; // indexed by k
    let mut unmet = [0usize; 6];
    for inst in &corpus.instances {
        let (v, e, k) = (
            inst.input.n() as u64,
            inst.input.edge_count() as u64,
            inst.k as u64,
        );
        let hypotheses = v >= 8 * k * k && 12 * k * e >= (2 * k - 1) * v * v;
        if hypotheses {
            let (_, cert) = dense_extract_with_certificate(&inst.input, inst.k).unwrap();
            assert!(cert.hypotheses_met && cert.conclusions_asserted);
            assert!(cert.vertex_holds && cert.density_holds, "{}", inst.name);
            met[inst.k] += 1;
        } else {
            unmet[inst.k] += 1;
        }
    }
    // the desk-scale corpus cannot reach v >= 8k^2 for k >= 3; a dense
    // Steiner system exercises the conditional path at k = 2
    let sts = bose_steiner_triple_system(33).unwrap();
    let (_, cert) = dense_extract_with_certificate(&sts, 2).unwrap();
    assert!(cert.hypotheses_met && cert.conclusions_asserted);
    assert!(cert.vertex_holds && cert.density_holds);
    let mut met2 = 1usize;
    let small = gen_random_free(12, 2, FreeMode::F, 9).unwrap();
    let (_, cert) = dense_extract_with_certificate(&small, 2).unwrap();
    assert!(!cert.hypotheses_met && !cert.conclusions_asserted);
    if cert.hypotheses_met {
        met2 += 1;
    }
    println!(
        "criterion 08 (conditional dense lemma; hypotheses met: k=2: {met2}, k=3: {}, k=4: {}, k=5: {}; unmet counted: {}, {}, {}): PASS",
        met[3], met[4], met[5], unmet[3], unmet[4], unmet[5]
    );
}

#[test]
fn criterion_09_ratio_table_and_g_below_f() {
    let cfg = SearchConfig::default();
    let table = ratio_table(2, 3..=9, FreeMode::F, &cfg).unwrap();
    assert_eq!(
        table.reference_constant,
        Some((1, 6)),
        "table must carry the documented limit constant annotation"
    );
    for row in &table.rows {
        assert!(row.exact, "n = {} not exact", row.n);
        // value/n^2 <= 1/6 in exact form
        assert!(
            6 * row.value <= row.n * row.n,
            "row n = {} exceeds the reference constant",
            row.n
        );
    }
    // g(n,k) <= f(n,k+2,k) on every computed pair
    for k in [2usize, 3, 4] {
        for n in 3..=7 {
            let f = compute_f(n, k + 2, k, &cfg).unwrap();
            let g = compute_g(n, k, &cfg).unwrap();
            assert!(f.exact && g.exact);
            assert!(
                g.value <= f.value,
                "g({n},{k}) = {} > f = {}",
                g.value,
                f.value
            );
        }
    }
    println!("criterion 09 (ratio table bounded by 1/6 with annotation; g <= f on all computed pairs): PASS");
}

#[test]
fn criterion_10_search_matches_naive_enumeration() {
    let mut checked = 0;
    let mut state = 0x10u64;
    let mut next = |bound: u64| {
        // splitmix-style stream local to the test
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        (z ^ (z >> 31)) % bound
    };
    let cfg = SearchConfig::default();
    while checked < 50 {
        let n = 4 + next(3) as usize; // 4..=6
        let k = 2 + next(4) as usize; // 2..=5
        let g_mode = k <= 4 && next(4) == 0;
        if g_mode {
            let record = compute_g(n, k, &cfg).unwrap();
            let (oracle, _) = naive::max_free_naive(n, NaiveMode::G { k });
            assert_eq!(record.value, oracle, "g({n},{k}) vs naive");
        } else {
            // s in [4, k+2]: the regime where the constraint bites
            let s = 4 + next(k as u64 - 1) as usize;
            let record = compute_f(n, s, k, &cfg).unwrap();
            let (oracle, _) = naive::max_free_naive(n, NaiveMode::F { s, k });
            assert_eq!(record.value, oracle, "f({n};{s},{k}) vs naive");
        }
        checked += 1;
    }
    println!("criterion 10 (branch-and-bound equals naive enumeration on {checked} tuples): PASS");
}
