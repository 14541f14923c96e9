//! Orderly branch-and-bound over free hypergraphs.
//!
//! States are edge lists extended in lexicographic order only; a state is
//! pruned when an isomorphic state was seen before (cheap invariant bucket,
//! then canonical key) or when its upper bound cannot beat the incumbent.
//! Extending in lex order while keeping first-seen representatives means the
//! lex-least member of every isomorphism class survives: its parent prefix
//! is again lex-least, and any isomorph seen earlier would have to be
//! lexicographically smaller, which contradicts minimality. So the dedup is
//! complete and the reported maximum is exact.
//!
//! Freeness is maintained incrementally: adding one edge can only create
//! configurations through that edge, so each extension runs the rooted
//! detector per forbidden level instead of re-scanning the whole state.
//!
//! Parallel mode distributes frontier subtrees at a fixed shallow depth to
//! workers; the incumbent is a shared monotone cell (stale reads only weaken
//! pruning) and each worker shards its own seen-store, which at worst
//! duplicates work across workers, never drops a class.

use super::canon;
use crate::configs::{detect_through, DetectorInput};
use crate::hypercore::Edge;
use crate::rng::SplitMix64;
use crate::{choose2, Error, Result};
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

const FRONTIER_DEPTH: usize = 4;
const BUDGET_CHECK_MASK: u64 = 0xff;

#[derive(Debug, Clone)]
pub(crate) struct SearchParams {
    pub n: usize,
    /// Forbidden (s,k) families; a state is feasible when it contains none.
    pub levels: Vec<(usize, usize)>,
    /// Pair-consumption bound applies (linear systems: the (4,2) level).
    pub linear_pair_bound: bool,
    /// Precomputed static upper bound on the edge count of any free state.
    pub static_bound: usize,
}

impl SearchParams {
    pub fn for_f(n: usize, s: usize, k: usize) -> Self {
        SearchParams {
            n,
            levels: vec![(s, k)],
            linear_pair_bound: s == 4 && k == 2,
            static_bound: subset_bound(n, s, k),
        }
    }

    pub fn for_g(n: usize, k: usize) -> Self {
        let mut levels = vec![(k + 2, k)];
        levels.extend((2..k).map(|l| (l + 1, l)));
        let lemma = if k >= 2 {
            ((k as u64 - 1) * choose2(n) / (2 * k as u64 - 1)) as usize
        } else {
            usize::MAX
        };
        SearchParams {
            n,
            levels,
            linear_pair_bound: k == 2,
            static_bound: lemma.min(subset_bound(n, k + 2, k)),
        }
    }
}

/// Any s vertices hold at most k-1 edges of an (s,k)-free graph, so
/// e * C(n-3, s-3) <= (k-1) * C(n, s).
fn subset_bound(n: usize, s: usize, k: usize) -> usize {
    if s > n || s < 3 {
        return usize::MAX;
    }
    let per_edge = binom(n - 3, s - 3);
    if per_edge == 0 {
        return usize::MAX;
    }
    ((k as u128 - 1) * binom(n, s) / per_edge) as usize
}

fn binom(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub bound_prunes: u64,
    pub dedup_hits: u64,
    pub canonical_keys: u64,
    pub elapsed_ms: u64,
}

pub(crate) struct SearchOutcome {
    pub value: usize,
    pub witness: Vec<Edge>,
    pub exact: bool,
    pub stats: SearchStats,
}

/// Seen-store: cheap invariant buckets holding lazily canonicalized states.
/// Most states have a unique bucket and never pay for a canonical key.
struct SeenStore {
    buckets: HashMap<u64, Vec<SeenEntry>>,
    canonical_keys: u64,
}

enum SeenEntry {
    Raw(Vec<Edge>),
    Canon(Vec<u32>),
}

impl SeenStore {
    fn new() -> Self {
        SeenStore {
            buckets: HashMap::new(),
            canonical_keys: 0,
        }
    }

    /// Returns false when an isomorphic state was inserted before.
    fn insert(&mut self, n: usize, edges: &[Edge]) -> bool {
        let inv = canon::cheap_invariant(n, edges);
        let bucket = self.buckets.entry(inv).or_default();
        if bucket.is_empty() {
            bucket.push(SeenEntry::Raw(edges.to_vec()));
            return true;
        }
        self.canonical_keys += 1;
        let key = canon::canonical_key(n, edges);
        for entry in bucket.iter_mut() {
            if let SeenEntry::Raw(raw) = entry {
                self.canonical_keys += 1;
                *entry = SeenEntry::Canon(canon::canonical_key(n, raw));
            }
            if let SeenEntry::Canon(existing) = entry {
                if *existing == key {
                    return false;
                }
            }
        }
        bucket.push(SeenEntry::Canon(key));
        true
    }
}

/// Incremental state: chosen triple ids plus the edge list and incidence
/// index the rooted detector needs.
pub(crate) struct IncrementalState {
    pub ids: Vec<u32>,
    pub edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl IncrementalState {
    pub fn new(n: usize) -> Self {
        IncrementalState {
            ids: Vec::new(),
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
        }
    }

    fn push(&mut self, id: u32, e: Edge) {
        let pos = self.edges.len();
        self.ids.push(id);
        self.edges.push(e);
        for v in e.vertices() {
            self.incidence[v].push(pos);
        }
    }

    fn pop(&mut self) {
        let e = self.edges.pop().expect("pop on empty state");
        self.ids.pop();
        for v in e.vertices() {
            self.incidence[v].pop();
        }
    }

    /// Adds the edge if the state stays free of every forbidden level;
    /// checking only configurations through the new edge is exact because
    /// the previous state was free.
    pub fn try_add(&mut self, id: u32, e: Edge, levels: &[(usize, usize)]) -> bool {
        self.push(id, e);
        let root = self.edges.len() - 1;
        let input = DetectorInput {
            edges: &self.edges,
            incidence: &self.incidence,
            multi: false,
        };
        for &(s, k) in levels {
            if detect_through(&input, s, k, root).is_some() {
                self.pop();
                return false;
            }
        }
        true
    }
}

/// All C(n,3) triples in lexicographic order.
pub(crate) fn all_triples(n: usize) -> Vec<Edge> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(Edge::new(a, b, c).expect("distinct"));
            }
        }
    }
    out
}

/// Greedy completion in shuffled order; cheap lower bounds for the search.
pub(crate) fn greedy_probe(n: usize, params: &SearchParams, seed: u64) -> Vec<u32> {
    let triples = all_triples(n);
    let mut order: Vec<u32> = (0..triples.len() as u32).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let mut state = IncrementalState::new(n);
    for id in order {
        state.try_add(id, triples[id as usize], &params.levels);
    }
    let mut ids = state.ids;
    ids.sort_unstable();
    ids
}

struct Shared<'a> {
    params: &'a SearchParams,
    triples: &'a [Edge],
    symmetry: bool,
    incumbent: AtomicUsize,
    witness: Mutex<(usize, Vec<u32>)>,
    nodes: AtomicU64,
    bound_prunes: AtomicU64,
    dedup_hits: AtomicU64,
    canonical_keys: AtomicU64,
    exhausted: AtomicBool,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Shared<'_> {
    fn offer(&self, state: &IncrementalState) {
        let e = state.ids.len();
        let prev = self.incumbent.fetch_max(e, Ordering::SeqCst);
        if e > prev {
            let mut w = self.witness.lock().expect("witness lock");
            if e > w.0 {
                *w = (e, state.ids.clone());
            }
        }
    }

    fn out_of_budget(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return true;
        }
        let n = self.nodes.load(Ordering::Relaxed);
        if n > self.max_nodes {
            self.exhausted.store(true, Ordering::Relaxed);
            return true;
        }
        if n & BUDGET_CHECK_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.exhausted.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn upper_bound(&self, state: &IncrementalState, start: usize) -> usize {
        let e = state.ids.len();
        let mut ub = e + (self.triples.len() - start);
        ub = ub.min(self.params.static_bound);
        if self.params.linear_pair_bound {
            // a linear state owns 3e distinct pairs; each future edge needs 3 fresh ones
            let pairs = choose2(self.params.n) as usize;
            ub = ub.min(e + (pairs - 3 * e) / 3);
        }
        ub
    }

    fn dfs(&self, state: &mut IncrementalState, start: usize, seen: &mut SeenStore) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if self.out_of_budget() {
            return;
        }
        self.offer(state);
        if self.upper_bound(state, start) <= self.incumbent.load(Ordering::Relaxed) {
            self.bound_prunes.fetch_add(1, Ordering::Relaxed);
            return;
        }
        if self.symmetry && !state.ids.is_empty() && !seen.insert(self.params.n, &state.edges) {
            self.dedup_hits.fetch_add(1, Ordering::Relaxed);
            return;
        }
        for (j, &triple) in self.triples.iter().enumerate().skip(start) {
            if state.ids.len() + (self.triples.len() - j) <= self.incumbent.load(Ordering::Relaxed)
            {
                break;
            }
            if state.try_add(j as u32, triple, &self.params.levels) {
                self.dfs(state, j + 1, seen);
                state.pop();
            }
        }
    }

    /// Depth-limited DFS collecting the frontier for the workers. Dedup and
    /// bounds apply exactly as in the sequential walk.
    fn collect_frontier(
        &self,
        state: &mut IncrementalState,
        start: usize,
        seen: &mut SeenStore,
        out: &mut Vec<(Vec<u32>, usize)>,
    ) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if self.out_of_budget() {
            return;
        }
        self.offer(state);
        if self.upper_bound(state, start) <= self.incumbent.load(Ordering::Relaxed) {
            self.bound_prunes.fetch_add(1, Ordering::Relaxed);
            return;
        }
        if self.symmetry && !state.ids.is_empty() && !seen.insert(self.params.n, &state.edges) {
            self.dedup_hits.fetch_add(1, Ordering::Relaxed);
            return;
        }
        if state.ids.len() == FRONTIER_DEPTH {
            out.push((state.ids.clone(), start));
            return;
        }
        for j in start..self.triples.len() {
            if state.try_add(j as u32, self.triples[j], &self.params.levels) {
                self.collect_frontier(state, j + 1, seen, out);
                state.pop();
            }
        }
    }
}

pub(crate) fn branch_and_bound(
    params: &SearchParams,
    symmetry: bool,
    threads: usize,
    max_nodes: u64,
    max_seconds: Option<f64>,
    initial: Option<&[u32]>,
    greedy_probes: u64,
) -> Result<SearchOutcome> {
    let started = Instant::now();
    let triples = all_triples(params.n);
    let shared = Shared {
        params,
        triples: &triples,
        symmetry,
        incumbent: AtomicUsize::new(0),
        witness: Mutex::new((0, Vec::new())),
        nodes: AtomicU64::new(0),
        bound_prunes: AtomicU64::new(0),
        dedup_hits: AtomicU64::new(0),
        canonical_keys: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        max_nodes,
        deadline: max_seconds.map(|s| started + std::time::Duration::from_secs_f64(s)),
    };

    // lower bounds first: supplied witness, then seeded greedy probes
    let mut replay = IncrementalState::new(params.n);
    if let Some(ids) = initial {
        for &id in ids {
            if !replay.try_add(id, triples[id as usize], &params.levels) {
                return Err(Error::InvalidParams(
                    "initial witness violates the freeness constraints".into(),
                ));
            }
        }
        shared.offer(&replay);
    }
    for seed in 0..greedy_probes {
        let ids = greedy_probe(params.n, params, seed);
        let mut probe = IncrementalState::new(params.n);
        for id in ids {
            assert!(probe.try_add(id, triples[id as usize], &params.levels));
        }
        shared.offer(&probe);
    }

    if threads <= 1 {
        let mut seen = SeenStore::new();
        let mut state = IncrementalState::new(params.n);
        shared.dfs(&mut state, 0, &mut seen);
        shared
            .canonical_keys
            .fetch_add(seen.canonical_keys, Ordering::Relaxed);
    } else {
        let mut seen = SeenStore::new();
        let mut state = IncrementalState::new(params.n);
        let mut frontier = Vec::new();
        shared.collect_frontier(&mut state, 0, &mut seen, &mut frontier);
        shared
            .canonical_keys
            .fetch_add(seen.canonical_keys, Ordering::Relaxed);
        let cursor = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| {
                    let mut seen = SeenStore::new();
                    loop {
                        let i = cursor.fetch_add(1, Ordering::SeqCst);
                        if i >= frontier.len() || shared.exhausted.load(Ordering::Relaxed) {
                            break;
                        }
                        let (ids, start) = &frontier[i];
                        let mut state = IncrementalState::new(params.n);
                        for &id in ids {
                            assert!(state.try_add(id, triples[id as usize], &params.levels));
                        }
                        for (j, &triple) in triples.iter().enumerate().skip(*start) {
                            if state.try_add(j as u32, triple, &params.levels) {
                                shared.dfs(&mut state, j + 1, &mut seen);
                                state.pop();
                            }
                        }
                    }
                    shared
                        .canonical_keys
                        .fetch_add(seen.canonical_keys, Ordering::Relaxed);
                });
            }
        });
    }

    let exhausted = shared.exhausted.load(Ordering::SeqCst);
    let (value, witness_ids) = {
        let w = shared.witness.lock().expect("witness lock");
        w.clone()
    };
    debug_assert_eq!(value, shared.incumbent.load(Ordering::SeqCst));
    let witness = witness_ids.iter().map(|&id| triples[id as usize]).collect();
    Ok(SearchOutcome {
        value,
        witness,
        exact: !exhausted,
        stats: SearchStats {
            nodes: shared.nodes.load(Ordering::Relaxed),
            bound_prunes: shared.bound_prunes.load(Ordering::Relaxed),
            dedup_hits: shared.dedup_hits.load(Ordering::Relaxed),
            canonical_keys: shared.canonical_keys.load(Ordering::Relaxed),
            elapsed_ms: started.elapsed().as_millis() as u64,
        },
    })
}
