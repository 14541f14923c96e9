//! Command-line front end: freeness checks, extraction with traces, lemma
//! verification suites, extremal search, corpus generation, ratio tables.
//!
//! Exit codes are a stable contract: 0 success / bound holds, 1 mathematical
//! violation or non-free input, 2 usage or I/O error.

use clap::{Parser, Subcommand, ValueEnum};
use configlab::configs::{self, FreenessReport};
use configlab::extremal::{self, FreeMode, RatioTable, ResultsCache, SearchConfig, SearchRecord};
use configlab::hypercore::{read_hypergraph, write_hypergraph, Hypergraph};
use configlab::{shadowbound, sparsifier};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "configlab",
    version,
    about = "Sparse 3-uniform hypergraph toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    F,
    G,
}

impl From<Mode> for FreeMode {
    fn from(m: Mode) -> FreeMode {
        match m {
            Mode::F => FreeMode::F,
            Mode::G => FreeMode::G,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check (k+2,k)- and (l+1,l)-freeness of a hypergraph file.
    CheckFree {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Which flag decides the exit code; the report always carries both.
        #[arg(long, value_enum, default_value_t = Mode::G)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Extract a g-free subgraph, writing the result and a JSONL trace.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Trace file: one JSON object per deletion step plus a summary line.
        #[arg(long)]
        trace: PathBuf,
        /// Output hypergraph file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the structural, shadow, and bound checks over a corpus.
    VerifyLemmas {
        /// Directory of hypergraph files, or a generator spec like
        /// "gen:count=100,n=15,seed=7" (n may be a range "n=10..40",
        /// optional "k=...", "mode=f|g").
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact extremal search for f(n;s,k) or g(n;k+2,k).
    SearchExtremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Span parameter for f-mode; defaults to k+2.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::F)]
        mode: Mode,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<f64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Disable isomorph rejection (exact but slower; for cross-checks).
        #[arg(long)]
        no_symmetry: bool,
        /// Witness file providing an initial lower bound.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Results cache path; overrides CONFIGLAB_CACHE and the default.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Raise the n cap of the search.
        #[arg(long)]
        desk_limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Table of (n, value, value/n^2) over a range of n.
    RatioTable {
        #[arg(long)]
        k: usize,
        /// Inclusive range, e.g. "3..9".
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = Mode::F)]
        mode: Mode,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<f64>,
        #[arg(long)]
        desk_limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Seeded random greedy free hypergraph.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Mandatory seed: corpora must be reproducible.
        #[arg(long)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Box<dyn std::error::Error>> {
    match command {
        Command::CheckFree {
            input,
            k,
            mode,
            format,
        } => check_free(&input, k, mode, format),
        Command::Extract {
            input,
            k,
            trace,
            output,
            format,
        } => extract(&input, k, &trace, output.as_deref(), format),
        Command::VerifyLemmas { corpus, k, format } => verify_lemmas(&corpus, k, format),
        Command::SearchExtremal {
            n,
            k,
            s,
            mode,
            budget_nodes,
            budget_secs,
            threads,
            no_symmetry,
            witness,
            cache,
            desk_limit,
            format,
        } => {
            let mut cfg = SearchConfig::default();
            if let Some(b) = budget_nodes {
                cfg.max_nodes = b;
            }
            cfg.max_seconds = budget_secs;
            cfg.threads = threads;
            cfg.symmetry_pruning = !no_symmetry;
            if let Some(limit) = desk_limit {
                cfg.desk_limit = limit;
            }
            if let Some(path) = witness {
                cfg.initial_witness = Some(load_hypergraph(&path)?);
            }
            search_extremal(n, k, s, mode.into(), cfg, cache, format)
        }
        Command::RatioTable {
            k,
            n,
            mode,
            cache,
            budget_nodes,
            budget_secs,
            desk_limit,
            format,
        } => {
            let mut cfg = SearchConfig::default();
            if let Some(b) = budget_nodes {
                cfg.max_nodes = b;
            }
            cfg.max_seconds = budget_secs;
            if let Some(limit) = desk_limit {
                cfg.desk_limit = limit;
            }
            ratio_table(k, &n, mode.into(), cfg, cache, format)
        }
        Command::GenRandom {
            n,
            k,
            mode,
            seed,
            output,
        } => gen_random(n, k, mode.into(), seed, output.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------------

fn load_hypergraph(path: &Path) -> Result<Hypergraph, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if path.extension().is_some_and(|x| x == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(read_hypergraph(&text)?)
    }
}

fn store_hypergraph(h: &Hypergraph, path: Option<&Path>) -> Result<(), Box<dyn std::error::Error>> {
    match path {
        Some(p) if p.extension().is_some_and(|x| x == "json") => {
            std::fs::write(p, serde_json::to_string_pretty(h)?)?
        }
        Some(p) => std::fs::write(p, write_hypergraph(h))?,
        None => print!("{}", write_hypergraph(h)),
    }
    Ok(())
}

fn cache_path(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("CONFIGLAB_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("configlab_cache.json"))
}

// ---------------------------------------------------------------------------
// check-free
// ---------------------------------------------------------------------------

fn print_report(report: &FreenessReport, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(report).expect("report serializes")
        ),
        Format::Text => {
            println!("k           : {}", report.k);
            println!("f-free      : {}", report.is_f_free);
            println!("g-free      : {}", report.is_g_free);
            if let Some(v) = &report.first_violation {
                println!(
                    "violation   : {} edges {:?} spanning {} vertices",
                    v.ell,
                    v.edges.to_vec(),
                    v.span_size
                );
            }
        }
    }
}

fn check_free(
    input: &Path,
    k: usize,
    mode: Mode,
    format: Format,
) -> Result<u8, Box<dyn std::error::Error>> {
    if k < 2 {
        return Err("require k >= 2".into());
    }
    let h = load_hypergraph(input)?;
    let report = configs::freeness_report(&h, k);
    print_report(&report, format);
    let free = match mode {
        Mode::F => report.is_f_free,
        Mode::G => report.is_g_free,
    };
    Ok(if free { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

fn extract(
    input: &Path,
    k: usize,
    trace_path: &Path,
    output: Option<&Path>,
    format: Format,
) -> Result<u8, Box<dyn std::error::Error>> {
    if k < 2 {
        return Err("require k >= 2".into());
    }
    let h = load_hypergraph(input)?;
    let (extracted, trace) = match sparsifier::extract_free_subgraph(&h, k) {
        Ok(pair) => pair,
        Err(configlab::Error::NotFree { s, k, witness }) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "error": format!("input is not ({s},{k})-free"),
                        "witness": witness,
                    })
                ),
                Format::Text => println!(
                    "input is not ({s},{k})-free; witness edges {:?} span {} vertices",
                    witness.edges.to_vec(),
                    witness.span_size
                ),
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    // belt and braces: the output must pass the independent g predicate
    if !configs::is_g_free(&extracted, k) {
        return Err("internal error: extraction output failed the g predicate".into());
    }
    std::fs::write(trace_path, trace.to_json_lines())?;
    store_hypergraph(&extracted.canonicalized(), output)?;
    if output.is_some() {
        // with --output the hypergraph went to a file, so stdout is free
        // for the run summary
        match format {
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "v_initial": trace.v_initial,
                    "e_initial": trace.e_initial,
                    "v_final": trace.v_final,
                    "e_final": trace.e_final,
                    "steps": trace.steps.len(),
                    "aggregate_holds": trace.aggregate_holds,
                })
            ),
            Format::Text => println!(
                "extracted {} -> {} vertices, {} -> {} edges in {} steps; aggregate bound holds",
                trace.v_initial,
                trace.v_final,
                trace.e_initial,
                trace.e_final,
                trace.steps.len()
            ),
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify-lemmas
// ---------------------------------------------------------------------------

struct CorpusItem {
    name: String,
    hypergraph: Hypergraph,
}

fn parse_gen_spec(
    spec: &str,
    default_k: usize,
) -> Result<Vec<CorpusItem>, Box<dyn std::error::Error>> {
    let mut count: usize = 20;
    let mut n_lo: usize = 12;
    let mut n_hi: usize = 12;
    let mut seed: Option<u64> = None;
    let mut k = default_k;
    let mut mode = FreeMode::F;
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad generator spec entry {part:?}"))?;
        match key.trim() {
            "count" => count = value.parse()?,
            "n" => {
                if let Some((lo, hi)) = value.split_once("..") {
                    n_lo = lo.parse()?;
                    n_hi = hi.parse()?;
                } else {
                    n_lo = value.parse()?;
                    n_hi = n_lo;
                }
            }
            "seed" => seed = Some(value.parse()?),
            "k" => k = value.parse()?,
            "mode" => mode = value.parse::<FreeMode>()?,
            other => return Err(format!("unknown generator spec key {other:?}").into()),
        }
    }
    let seed = seed.ok_or("generator spec requires an explicit seed=")?;
    if n_hi < n_lo {
        return Err("empty n range in generator spec".into());
    }
    let mut items = Vec::new();
    for i in 0..count {
        let n = n_lo + (i % (n_hi - n_lo + 1));
        let h = extremal::gen_random_free(n, k, mode, seed.wrapping_add(i as u64))?;
        items.push(CorpusItem {
            name: format!("gen[{i}] n={n} seed={}", seed.wrapping_add(i as u64)),
            hypergraph: h,
        });
    }
    Ok(items)
}

fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusItem>, Box<dyn std::error::Error>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read corpus directory {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut items = Vec::new();
    for path in paths {
        let hypergraph = load_hypergraph(&path)?;
        items.push(CorpusItem {
            name: path.display().to_string(),
            hypergraph,
        });
    }
    Ok(items)
}

#[derive(Default, serde::Serialize)]
struct VerifySummary {
    instances: usize,
    already_g_free: usize,
    extraction_steps: usize,
    component_checks: usize,
    bound_checks: usize,
    failures: Vec<String>,
}

fn verify_lemmas(corpus: &str, k: usize, format: Format) -> Result<u8, Box<dyn std::error::Error>> {
    if k < 2 {
        return Err("require k >= 2".into());
    }
    let items = if let Some(spec) = corpus.strip_prefix("gen:") {
        parse_gen_spec(spec, k)?
    } else {
        load_corpus_dir(Path::new(corpus))?
    };
    let mut summary = VerifySummary::default();
    if items.is_empty() {
        eprintln!("warning: empty corpus, nothing verified");
    }
    for item in &items {
        summary.instances += 1;
        let h = &item.hypergraph;
        if !configs::is_f_free(h, k) {
            summary
                .failures
                .push(format!("{}: not ({},{k})-free", item.name, k + 2));
            continue;
        }
        if configs::is_g_free(h, k) {
            summary.already_g_free += 1;
            match check_g_free_graph(h, k) {
                Ok((c, b)) => {
                    summary.component_checks += c;
                    summary.bound_checks += b;
                }
                Err(e) => summary.failures.push(format!("{}: {e}", item.name)),
            }
        }
        match sparsifier::extract_free_subgraph(h, k) {
            Ok((extracted, trace)) => {
                summary.extraction_steps += trace.steps.len();
                if !trace.aggregate_holds || trace.steps.iter().any(|s| !s.step_bound_holds) {
                    summary
                        .failures
                        .push(format!("{}: loss bound violated", item.name));
                }
                match check_g_free_graph(&extracted, k) {
                    Ok((c, b)) => {
                        summary.component_checks += c;
                        summary.bound_checks += b;
                    }
                    Err(e) => summary.failures.push(format!("{}: {e}", item.name)),
                }
            }
            Err(e) => summary.failures.push(format!("{}: {e}", item.name)),
        }
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string(&summary)?),
        Format::Text => {
            println!("instances         : {}", summary.instances);
            println!("already g-free    : {}", summary.already_g_free);
            println!("extraction steps  : {}", summary.extraction_steps);
            println!("component checks  : {}", summary.component_checks);
            println!("bound checks      : {}", summary.bound_checks);
            println!("failures          : {}", summary.failures.len());
            for f in &summary.failures {
                println!("  FAIL {f}");
            }
        }
    }
    Ok(if summary.failures.is_empty() { 0 } else { 1 })
}

fn check_g_free_graph(h: &Hypergraph, k: usize) -> configlab::Result<(usize, usize)> {
    let claims = shadowbound::verify_component_claims(h, k)?;
    let bound = shadowbound::edge_bound_check(h, k)?;
    if !bound.holds {
        return Err(configlab::Error::BoundViolation(
            "edge bound failed on a g-free graph".into(),
        ));
    }
    if !shadowbound::theorem_bound_holds(h, k) {
        return Err(configlab::Error::BoundViolation(
            "finite-n bound failed on a g-free graph".into(),
        ));
    }
    Ok((claims.components.len(), 2))
}

// ---------------------------------------------------------------------------
// search-extremal / ratio-table / gen-random
// ---------------------------------------------------------------------------

fn print_record(record: &SearchRecord, cached: bool, format: Format) {
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(record).expect("record serializes");
            value["cached"] = serde_json::json!(cached);
            println!("{value}");
        }
        Format::Text => {
            let status = if record.exact {
                "exact"
            } else {
                "lower bound (budget exhausted)"
            };
            let origin = if cached { ", cached" } else { "" };
            println!(
                "{}({};{},{}) = {} [{status}{origin}] nodes={} prunes={} dedup={} elapsed={}ms",
                record.mode,
                record.n,
                record.s,
                record.k,
                record.value,
                record.stats.nodes,
                record.stats.bound_prunes,
                record.stats.dedup_hits,
                record.stats.elapsed_ms
            );
        }
    }
}

fn get_or_compute(
    cache: &mut ResultsCache,
    mode: FreeMode,
    n: usize,
    s: usize,
    k: usize,
    cfg: &SearchConfig,
) -> Result<(SearchRecord, bool), Box<dyn std::error::Error>> {
    if let Some(record) = cache.get(mode, n, s, k) {
        if record.exact {
            // belt and braces: never trust the cache file blindly
            let sound = match mode {
                FreeMode::F => configs::find_configuration(&record.witness, s, k).is_none(),
                FreeMode::G => configs::is_g_free(&record.witness, k),
            };
            if sound && record.witness.edge_count() == record.value {
                return Ok((record.clone(), true));
            }
        }
    }
    let record = match mode {
        FreeMode::F => extremal::compute_f(n, s, k, cfg)?,
        FreeMode::G => extremal::compute_g(n, k, cfg)?,
    };
    cache.insert(record.clone());
    Ok((record, false))
}

fn search_extremal(
    n: usize,
    k: usize,
    s: Option<usize>,
    mode: FreeMode,
    cfg: SearchConfig,
    cache_flag: Option<PathBuf>,
    format: Format,
) -> Result<u8, Box<dyn std::error::Error>> {
    let s = s.unwrap_or(k + 2);
    if mode == FreeMode::G && s != k + 2 {
        return Err("g-mode fixes s = k+2".into());
    }
    let path = cache_path(cache_flag);
    let mut cache = ResultsCache::load(&path)?;
    let (record, cached) = get_or_compute(&mut cache, mode, n, s, k, &cfg)?;
    if !cached {
        cache.save(&path)?;
    }
    print_record(&record, cached, format);
    Ok(0)
}

fn parse_range(text: &str) -> Result<(usize, usize), Box<dyn std::error::Error>> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("range must look like 3..9, got {text:?}"))?;
    let lo: usize = lo.parse()?;
    let hi: usize = hi.parse()?;
    if hi < lo {
        return Err("empty range".into());
    }
    Ok((lo, hi))
}

fn ratio_table(
    k: usize,
    n_range: &str,
    mode: FreeMode,
    cfg: SearchConfig,
    cache_flag: Option<PathBuf>,
    format: TableFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let (lo, hi) = parse_range(n_range)?;
    let path = cache_path(cache_flag);
    let mut cache = ResultsCache::load(&path)?;
    let mut rows = Vec::new();
    let mut any_fresh = false;
    for n in lo..=hi {
        let s = k + 2;
        let (record, cached) = get_or_compute(&mut cache, mode, n, s, k, &cfg)?;
        any_fresh |= !cached;
        rows.push(extremal::RatioRow {
            n,
            value: record.value,
            exact: record.exact,
            ratio: record.value as f64 / (n * n) as f64,
        });
    }
    if any_fresh {
        cache.save(&path)?;
    }
    let table = RatioTable {
        k,
        mode,
        rows,
        reference_constant: extremal::reference_limit_constant(k),
    };
    match format {
        TableFormat::Json => println!("{}", serde_json::to_string(&table)?),
        TableFormat::Csv => {
            println!("n,value,exact,ratio");
            for row in &table.rows {
                println!("{},{},{},{:.6}", row.n, row.value, row.exact, row.ratio);
            }
            if let Some((num, den)) = table.reference_constant {
                println!("# reference limit constant for k={k}: {num}/{den}");
            }
        }
    }
    Ok(0)
}

fn gen_random(
    n: usize,
    k: usize,
    mode: FreeMode,
    seed: u64,
    output: Option<&Path>,
) -> Result<u8, Box<dyn std::error::Error>> {
    let h = extremal::gen_random_free(n, k, mode, seed)?;
    // self-check through the independent predicate before anything is written
    let ok = match mode {
        FreeMode::F => configs::is_f_free(&h, k),
        FreeMode::G => configs::is_g_free(&h, k),
    };
    if !ok {
        return Err("internal error: generated hypergraph failed its own predicate".into());
    }
    store_hypergraph(&h, output)?;
    if output.is_some() {
        eprintln!(
            "generated n={} e={} (mode {mode}, seed {seed}); self-check passed",
            h.n(),
            h.edge_count()
        );
    }
    Ok(0)
}
