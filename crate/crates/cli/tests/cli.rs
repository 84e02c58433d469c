use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn seymour(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seymour"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const C3: &str = "3 3\n0 1\n1 2\n2 0\n";

#[test]
fn analyze_reports_every_vertex() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "path.txt", "# a path\n3 2\n0 1\n1 2\n");
    let out = seymour(&["analyze", &path]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\n0 1 1 0 yes\n"), "{text}");
    assert!(text.contains("\n1 1 0 1 no\n"), "{text}");
    assert!(text.contains("\n2 0 0 0 yes\n"), "{text}");
    assert!(text.ends_with("satisfactory 2/3\n"));

    let json: serde_json::Value = serde_json::from_str(&stdout(&seymour(&["analyze", "--json", &path]))).unwrap();
    assert_eq!(json["satisfactory_count"], 2);
    assert_eq!(json["vertices"][1]["anti_satisfaction"], 1);
}

#[test]
fn filter_emits_witness_json() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "c3.txt", C3);
    let short: serde_json::Value = serde_json::from_str(&stdout(&seymour(&["filter", &path]))).unwrap();
    assert_eq!(short["survived"], false);
    assert_eq!(short["verdicts"].as_array().unwrap().len(), 1);
    assert_eq!(short["verdicts"][0]["witness"]["kind"], "satisfactory-vertex");

    let full: serde_json::Value =
        serde_json::from_str(&stdout(&seymour(&["filter", "--no-short-circuit", &path]))).unwrap();
    assert_eq!(full["verdicts"].as_array().unwrap().len(), 8);
}

#[test]
fn product_writes_graph_and_labels() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.txt", C3);
    let out_path = dir.path().join("p.txt");
    let labels = dir.path().join("l.txt");
    let out = seymour(&[
        "product",
        &d,
        &d,
        "-o",
        out_path.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).is_empty());
    assert!(fs::read_to_string(&out_path).unwrap().starts_with("9 36\n"));
    let table = fs::read_to_string(&labels).unwrap();
    assert!(table.starts_with("# product d h\n0 0 0\n1 0 1\n"));
    assert_eq!(table.lines().count(), 10);
}

#[test]
fn product_warns_on_invalid_second_factor() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.txt", C3);
    // Vertex 0 has one out-neighbor and two vertices at distance 2.
    let h = write(&dir, "h.txt", "4 3\n0 1\n1 2\n1 3\n");
    let out_path = dir.path().join("p.txt");
    let out = seymour(&["product", &d, &h, "-o", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));
    assert!(Path::new(&out_path).exists());
}

#[test]
fn seeded_commands_are_byte_identical() {
    let search = [
        "search", "--mode", "random", "--model", "digon-free", "--p", "0.6", "--n", "9", "--count", "300",
        "--seed", "77", "--omit-timing",
    ];
    let a = seymour(&search);
    let b = seymour(&search);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = search.to_vec();
    parallel.extend(["--workers", "3"]);
    assert_eq!(seymour(&parallel).stdout, a.stdout);

    let generate = ["generate", "--model", "triangle-free", "--p", "0.3", "--n", "12", "--seed", "5"];
    let g1 = seymour(&generate);
    assert!(g1.status.success());
    assert_eq!(g1.stdout, seymour(&generate).stdout);
    assert_ne!(
        g1.stdout,
        seymour(&["generate", "--model", "triangle-free", "--p", "0.3", "--n", "12", "--seed", "6"]).stdout
    );
}

#[test]
fn generated_file_round_trips_through_analyze() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.txt");
    let path = path.to_str().unwrap();
    let out = seymour(&["generate", "--model", "tournament", "--n", "7", "--seed", "1", "-o", path]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(fs::read_to_string(path).unwrap().starts_with("7 21\n"));
    let analyzed = stdout(&seymour(&["analyze", path]));
    assert_eq!(analyzed.lines().count(), 9);
}

#[test]
fn exhaustive_search_reports_and_exits_cleanly() {
    let out = seymour(&["search", "--mode", "exhaustive", "--n", "4", "--omit-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["graphs_examined"], 729);
    assert_eq!(report["counterexamples_found"], 0);
    assert!(report.get("elapsed_ms").is_none());

    let timed: serde_json::Value =
        serde_json::from_str(&stdout(&seymour(&["search", "--mode", "exhaustive", "--n", "3"]))).unwrap();
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn invalid_requests_fail_with_diagnostics() {
    let dir = TempDir::new().unwrap();
    let digon = write(&dir, "digon.txt", "2 2\n0 1\n1 0\n");
    let out = seymour(&["analyze", &digon]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let short = write(&dir, "short.txt", "3 2\n0 1\n");
    assert_eq!(seymour(&["filter", &short]).status.code(), Some(1));

    let missing = dir.path().join("absent.txt");
    assert_eq!(seymour(&["analyze", missing.to_str().unwrap()]).status.code(), Some(1));

    let no_seed = seymour(&["search", "--mode", "random", "--model", "tournament", "--n", "5", "--count", "3"]);
    assert_eq!(no_seed.status.code(), Some(1));
    assert!(stderr(&no_seed).contains("--seed"));

    let too_big = seymour(&["search", "--mode", "exhaustive", "--n", "7"]);
    assert_eq!(too_big.status.code(), Some(1));
    assert!(stderr(&too_big).contains("ceiling"));

    let bad_p = seymour(&["generate", "--model", "acyclic", "--n", "4", "--seed", "0", "--p", "2"]);
    assert_eq!(bad_p.status.code(), Some(1));

    // clap rejects a missing --seed before anything runs.
    let no_seed = seymour(&["generate", "--model", "acyclic", "--n", "4"]);
    assert!(!no_seed.status.success());
}
