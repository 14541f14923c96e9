//! Exact desk-scale computation of the extremal functions f and g by
//! isomorph-pruned branch-and-bound, plus the random-greedy corpus
//! generator and the results cache.

mod canon;
mod search;

pub use search::SearchStats;

use crate::configs;
use crate::hypercore::{Edge, Hypergraph};
use crate::rng::SplitMix64;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;

/// Which freeness family a search or generator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeMode {
    /// (s,k)-free only.
    F,
    /// (k+2,k)-free and (l+1,l)-free for l in [2,k-1].
    G,
}

impl fmt::Display for FreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeMode::F => write!(f, "f"),
            FreeMode::G => write!(f, "g"),
        }
    }
}

impl std::str::FromStr for FreeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" | "F" => Ok(FreeMode::F),
            "g" | "G" => Ok(FreeMode::G),
            other => Err(Error::InvalidParams(format!("unknown mode {other:?}"))),
        }
    }
}

/// Budgets and knobs for the exact search.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
    pub symmetry_pruning: bool,
    pub threads: usize,
    /// Largest n accepted by compute_f / compute_g.
    pub desk_limit: usize,
    /// Seeded greedy completions run before the search for a lower bound.
    pub greedy_probes: u64,
    /// Optional starting witness; verified before use.
    pub initial_witness: Option<Hypergraph>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: u64::MAX,
            max_seconds: None,
            symmetry_pruning: true,
            threads: 1,
            desk_limit: 10,
            greedy_probes: 64,
            initial_witness: None,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 {
            return Err(Error::InvalidParams("max_nodes must be positive".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParams("threads must be positive".into()));
        }
        if let Some(s) = self.max_seconds {
            if s.is_nan() || s <= 0.0 {
                return Err(Error::InvalidParams("max_seconds must be positive".into()));
            }
        }
        if self.desk_limit < 3 {
            return Err(Error::InvalidParams("desk_limit must be at least 3".into()));
        }
        Ok(())
    }
}

/// An extremal value with its witness and search statistics.
///
/// `exact = false` means the budget ran out: `value` is then only a certified
/// lower bound, never reported as the extremal value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchRecord {
    pub mode: FreeMode,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub value: usize,
    pub exact: bool,
    pub witness: Hypergraph,
    pub stats: SearchStats,
}

fn witness_ids(n: usize, h: &Hypergraph) -> Result<Vec<u32>> {
    if h.n() != n {
        return Err(Error::InvalidParams(format!(
            "initial witness has n = {}, expected {n}",
            h.n()
        )));
    }
    let triples = search::all_triples(n);
    h.edges()
        .iter()
        .map(|e| {
            triples
                .binary_search(e)
                .map(|i| i as u32)
                .map_err(|_| Error::InvalidParams("witness edge not a valid triple".into()))
        })
        .collect()
}

fn run_search(
    params: &search::SearchParams,
    mode: FreeMode,
    n: usize,
    s: usize,
    k: usize,
    cfg: &SearchConfig,
) -> Result<SearchRecord> {
    let initial = match &cfg.initial_witness {
        Some(h) => Some(witness_ids(n, h)?),
        None => None,
    };
    let outcome = search::branch_and_bound(
        params,
        cfg.symmetry_pruning,
        cfg.threads,
        cfg.max_nodes,
        cfg.max_seconds,
        initial.as_deref(),
        cfg.greedy_probes,
    )?;
    let mut edges = outcome.witness;
    edges.sort_unstable();
    let witness = Hypergraph::new(n, edges, false)?;
    // belt and braces: re-verify the witness through the configs module,
    // not the search's incremental state
    let sound = match mode {
        FreeMode::F => configs::find_configuration(&witness, s, k).is_none(),
        FreeMode::G => configs::is_g_free(&witness, k),
    };
    if !sound || witness.edge_count() != outcome.value {
        return Err(Error::StructuralViolation(format!(
            "search witness failed independent verification (mode {mode}, n={n}, s={s}, k={k})"
        )));
    }
    Ok(SearchRecord {
        mode,
        n,
        s,
        k,
        value: outcome.value,
        exact: outcome.exact,
        witness,
        stats: outcome.stats,
    })
}

/// Exact value of f(n; s, k): the maximum edge count of an (s,k)-free
/// 3-uniform hypergraph on n vertices.
pub fn compute_f(n: usize, s: usize, k: usize, cfg: &SearchConfig) -> Result<SearchRecord> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidParams("require k >= 2".into()));
    }
    if s < 3 {
        return Err(Error::InvalidParams("require s >= 3".into()));
    }
    if !(3..=cfg.desk_limit).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "require 3 <= n <= {} (desk limit)",
            cfg.desk_limit
        )));
    }
    let params = search::SearchParams::for_f(n, s, k);
    run_search(&params, FreeMode::F, n, s, k, cfg)
}

/// Exact value of g(n; k+2, k): as f at s = k+2, but additionally
/// (l+1,l)-free for all l in [2,k-1].
pub fn compute_g(n: usize, k: usize, cfg: &SearchConfig) -> Result<SearchRecord> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidParams("require k >= 2".into()));
    }
    if !(3..=cfg.desk_limit).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "require 3 <= n <= {} (desk limit)",
            cfg.desk_limit
        )));
    }
    let params = search::SearchParams::for_g(n, k);
    run_search(&params, FreeMode::G, n, k + 2, k, cfg)
}

/// Known limit constants of n^-2 f(n;k+2,k), carried as documented
/// reference values for table annotation; they are n -> infinity statements
/// and are never asserted against finite data.
pub fn reference_limit_constant(k: usize) -> Option<(u64, u64)> {
    match k {
        2 => Some((1, 6)),
        3 => Some((1, 5)),
        4 => Some((7, 36)),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub value: usize,
    pub exact: bool,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioTable {
    pub k: usize,
    pub mode: FreeMode,
    pub rows: Vec<RatioRow>,
    /// (num, den) of the known limit constant for this k, when determined.
    pub reference_constant: Option<(u64, u64)>,
}

/// Values and value/n^2 ratios over a range of n, at s = k+2.
///
/// Budget exhaustion is propagated per row through `exact = false`; such
/// rows carry lower bounds, not extremal values.
pub fn ratio_table(
    k: usize,
    n_range: RangeInclusive<usize>,
    mode: FreeMode,
    cfg: &SearchConfig,
) -> Result<RatioTable> {
    let mut rows = Vec::new();
    for n in n_range {
        let record = match mode {
            FreeMode::F => compute_f(n, k + 2, k, cfg)?,
            FreeMode::G => compute_g(n, k, cfg)?,
        };
        rows.push(RatioRow {
            n,
            value: record.value,
            exact: record.exact,
            ratio: record.value as f64 / (n * n) as f64,
        });
    }
    Ok(RatioTable {
        k,
        mode,
        rows,
        reference_constant: reference_limit_constant(k),
    })
}

/// Random greedy free hypergraph: shuffles all C(n,3) triples with the
/// seeded generator and keeps each one that preserves the mode's freeness.
/// Same seed, same output, bit for bit.
pub fn gen_random_free(n: usize, k: usize, mode: FreeMode, seed: u64) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidParams("require k >= 2".into()));
    }
    if !(3..=crate::MAX_VERTICES).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "require 3 <= n <= {}",
            crate::MAX_VERTICES
        )));
    }
    let params = match mode {
        FreeMode::F => search::SearchParams::for_f(n, k + 2, k),
        FreeMode::G => search::SearchParams::for_g(n, k),
    };
    let triples = search::all_triples(n);
    let mut order: Vec<u32> = (0..triples.len() as u32).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let mut state = search::IncrementalState::new(n);
    for id in order {
        state.try_add(id, triples[id as usize], &params.levels);
    }
    let mut edges = state.edges;
    edges.sort_unstable();
    Hypergraph::new(n, edges, false)
}

/// The Bose construction of a Steiner triple system on n = 3m vertices,
/// m odd: a maximum linear system used as a dense corpus instance.
pub fn bose_steiner_triple_system(n: usize) -> Result<Hypergraph> {
    if n % 6 != 3 || n < 9 {
        return Err(Error::InvalidParams(
            "bose construction needs n = 3 (mod 6), n >= 9".into(),
        ));
    }
    let m = n / 3;
    let inv2 = m / 2 + 1; // inverse of 2 mod m, m odd
    let vertex = |x: usize, i: usize| i * m + x;
    let mut edges = Vec::new();
    for x in 0..m {
        edges.push(Edge::new(vertex(x, 0), vertex(x, 1), vertex(x, 2))?);
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                let z = ((x + y) * inv2) % m;
                edges.push(Edge::new(
                    vertex(x, i),
                    vertex(y, i),
                    vertex(z, (i + 1) % 3),
                )?);
            }
        }
    }
    edges.sort_unstable();
    Hypergraph::new(n, edges, false)
}

// ---------------------------------------------------------------------------
// Results cache
// ---------------------------------------------------------------------------

pub fn cache_key(mode: FreeMode, n: usize, s: usize, k: usize) -> String {
    format!("{mode}:{n}:{s}:{k}")
}

/// JSON file keyed by (mode, n, s, k); exact records short-circuit
/// recomputation in the CLI.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct ResultsCache {
    map: BTreeMap<String, SearchRecord>,
}

impl ResultsCache {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(ResultsCache::default());
        }
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn get(&self, mode: FreeMode, n: usize, s: usize, k: usize) -> Option<&SearchRecord> {
        self.map.get(&cache_key(mode, n, s, k))
    }

    pub fn insert(&mut self, record: SearchRecord) {
        self.map
            .insert(cache_key(record.mode, record.n, record.s, record.k), record);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
