//! End-to-end tests of the binary: exit-code contract, file formats,
//! cache behavior, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_configlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("configlab-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

const FANO: &str = "7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n";

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn check_free_exit_codes() {
    let tmp = TempDir::new("checkfree");
    let fano = tmp.path("fano.txt");
    write(&fano, FANO);
    let out = run(&[
        "check-free",
        "--input",
        fano.to_str().unwrap(),
        "--k",
        "2",
        "--mode",
        "f",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["is_f_free"], serde_json::json!(true));
    assert_eq!(report["is_g_free"], serde_json::json!(true));

    let pair = tmp.path("pair.txt");
    write(&pair, "4 2\n0 1 2\n0 1 3\n");
    let out = run(&["check-free", "--input", pair.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(
        report["first_violation"]["edges"],
        serde_json::json!([0, 1])
    );

    let bad = tmp.path("bad.txt");
    write(&bad, "not a hypergraph\n");
    let out = run(&["check-free", "--input", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&out), 2);

    let missing = tmp.path("missing.txt");
    let out = run(&[
        "check-free",
        "--input",
        missing.to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn extract_round_trip_and_trace() {
    let tmp = TempDir::new("extract");
    // g-free input comes back byte-identical in canonical form, empty trace
    let fano = tmp.path("fano.txt");
    write(&fano, FANO);
    let trace = tmp.path("trace.jsonl");
    let outfile = tmp.path("out.txt");
    let out = run(&[
        "extract",
        "--input",
        fano.to_str().unwrap(),
        "--k",
        "2",
        "--trace",
        trace.to_str().unwrap(),
        "--output",
        outfile.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&outfile).unwrap(), FANO);
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = trace_text.trim_end().lines().collect();
    assert_eq!(lines.len(), 1); // summary only: no steps
    let summary: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(summary["summary"]["steps"], serde_json::json!(0));
    assert_eq!(
        summary["summary"]["aggregate_holds"],
        serde_json::json!(true)
    );

    // one-step extraction on a repeated edge (multi), then the output
    // passes check-free in g mode
    let multi = tmp.path("multi.txt");
    write(&multi, "7 3 multi\n0 1 2\n0 1 2\n4 5 6\n");
    let out2 = tmp.path("out2.txt");
    let trace2 = tmp.path("trace2.jsonl");
    let out = run(&[
        "extract",
        "--input",
        multi.to_str().unwrap(),
        "--k",
        "3",
        "--trace",
        trace2.to_str().unwrap(),
        "--output",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let trace_text = std::fs::read_to_string(&trace2).unwrap();
    let lines: Vec<&str> = trace_text.trim_end().lines().collect();
    assert_eq!(lines.len(), 2);
    let step: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(step["span_vertices"], serde_json::json!([0, 1, 2]));
    assert_eq!(step["edge_loss"], serde_json::json!(2));
    let check = run(&[
        "check-free",
        "--input",
        out2.to_str().unwrap(),
        "--k",
        "3",
        "--mode",
        "g",
    ]);
    assert_eq!(code(&check), 0);

    // non-free input: exit 1 and the witness on stdout
    let dense = tmp.path("dense.txt");
    write(&dense, "6 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n");
    let trace3 = tmp.path("trace3.jsonl");
    let out = run(&[
        "extract",
        "--input",
        dense.to_str().unwrap(),
        "--k",
        "4",
        "--trace",
        trace3.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    let msg: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(msg["witness"]["edges"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn verify_lemmas_generated_and_dir_corpora() {
    let tmp = TempDir::new("verify");
    let out = run(&[
        "verify-lemmas",
        "--corpus",
        "gen:count=6,n=10..16,seed=5,k=4",
        "--k",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(summary["instances"], serde_json::json!(6));
    assert_eq!(summary["failures"], serde_json::json!([]));

    // a directory with one non-free file fails and names the file
    let dir = tmp.path("corpus");
    std::fs::create_dir_all(&dir).unwrap();
    write(&dir.join("good.txt"), FANO);
    write(&dir.join("notfree.txt"), "4 2\n0 1 2\n0 1 3\n");
    let out = run(&[
        "verify-lemmas",
        "--corpus",
        dir.to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("notfree.txt"));

    // empty corpus: warning, zero counts, exit 0
    let empty = tmp.path("empty");
    std::fs::create_dir_all(&empty).unwrap();
    let out = run(&[
        "verify-lemmas",
        "--corpus",
        empty.to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty corpus"));

    // unreadable corpus: exit 2
    let out = run(&[
        "verify-lemmas",
        "--corpus",
        tmp.path("nodir").to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert_eq!(code(&out), 2);

    // generator spec without a seed is a usage error
    let out = run(&["verify-lemmas", "--corpus", "gen:count=3,n=10", "--k", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_extremal_caches_results() {
    let tmp = TempDir::new("search");
    let cache = tmp.path("cache.json");
    let out = run(&[
        "search-extremal",
        "--n",
        "7",
        "--k",
        "2",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("f(7;4,2) = 7"));
    assert!(stdout(&out).contains("[exact]"));
    assert!(cache.exists());

    // second run is served from the cache
    let out = run(&[
        "search-extremal",
        "--n",
        "7",
        "--k",
        "2",
        "--cache",
        cache.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["cached"], serde_json::json!(true));
    assert_eq!(record["value"], serde_json::json!(7));
    assert_eq!(record["witness"]["n"], serde_json::json!(7));

    // the CONFIGLAB_CACHE env var selects the same cache
    let out = bin()
        .args([
            "search-extremal",
            "--n",
            "7",
            "--k",
            "2",
            "--format",
            "json",
        ])
        .env("CONFIGLAB_CACHE", cache.to_str().unwrap())
        .current_dir(&tmp.0)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["cached"], serde_json::json!(true));

    // g-mode with an explicit s other than k+2 is a usage error
    let out = run(&[
        "search-extremal",
        "--n",
        "6",
        "--k",
        "3",
        "--s",
        "7",
        "--mode",
        "g",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn ratio_table_csv_shape() {
    let tmp = TempDir::new("ratio");
    let cache = tmp.path("cache.json");
    let out = run(&[
        "ratio-table",
        "--k",
        "2",
        "--n",
        "3..7",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,value,exact,ratio"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with(['n', '#']))
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[4].starts_with("7,7,true,0.142857"));
    assert!(text.contains("# reference limit constant for k=2: 1/6"));

    let out = run(&["ratio-table", "--k", "2", "--n", "9..3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_random_is_seeded_and_self_checked() {
    let tmp = TempDir::new("gen");
    let a = tmp.path("a.txt");
    let b = tmp.path("b.txt");
    for path in [&a, &b] {
        let out = run(&[
            "gen-random",
            "--n",
            "15",
            "--k",
            "3",
            "--mode",
            "g",
            "--seed",
            "11",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed must give identical bytes"
    );
    let check = run(&[
        "check-free",
        "--input",
        a.to_str().unwrap(),
        "--k",
        "3",
        "--mode",
        "g",
    ]);
    assert_eq!(code(&check), 0);

    // the seed is mandatory: no entropy default
    let out = run(&["gen-random", "--n", "10", "--k", "3", "--mode", "f"]);
    assert_eq!(code(&out), 2);

    // json output by extension
    let j = tmp.path("c.json");
    let out = run(&[
        "gen-random",
        "--n",
        "9",
        "--k",
        "2",
        "--mode",
        "f",
        "--seed",
        "1",
        "--output",
        j.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(parsed["n"], serde_json::json!(9));
    let check = run(&["check-free", "--input", j.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&check), 0);
}
