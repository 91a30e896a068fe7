use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn spanners(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanners")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = spanners(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Edge lines only; isolated vertices get lines of their own.
fn edge_lines(p: &Path) -> Vec<String> {
    let mut lines: Vec<String> =
        fs::read_to_string(p).unwrap().lines().filter(|l| l.contains(' ')).map(str::to_string).collect();
    lines.sort();
    lines
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_writes_the_requested_graph() {
    let dir = TempDir::new().unwrap();
    let cycle = path(&dir, "c.txt");
    ok(&["gen", "--kind", "cycle", "--n", "10", "-o", s(&cycle)]);
    assert_eq!(edge_lines(&cycle).len(), 10);
    let grid = path(&dir, "g.txt");
    ok(&["gen", "--kind", "grid", "--rows", "3", "--cols", "4", "-o", s(&grid)]);
    assert_eq!(edge_lines(&grid).len(), 17);
    let gnm = path(&dir, "r.txt");
    ok(&["gen", "--kind", "gnm", "--n", "100", "--m", "300", "--seed", "4", "-o", s(&gnm)]);
    assert_eq!(edge_lines(&gnm).len(), 300);
}

#[test]
fn same_seed_same_output() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    ok(&["gen", "--kind", "gnm", "--n", "300", "--m", "1200", "--seed", "9", "-o", s(&g)]);
    let runs: Vec<String> = (0..2)
        .map(|i| {
            let h = path(&dir, &format!("h{i}.txt"));
            ok(&["build", "--graph", s(&g), "--alg", "sublinear", "--seed", "3", "-o", s(&h)]);
            fs::read_to_string(h).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn sublinear_on_a_path_keeps_the_path() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "p.txt");
    let h = path(&dir, "h.txt");
    ok(&["gen", "--kind", "path", "--n", "100", "-o", s(&g)]);
    ok(&["build", "--graph", s(&g), "--alg", "sublinear", "-o", s(&h)]);
    assert_eq!(edge_lines(&h), edge_lines(&g));
}

#[test]
fn subset_with_one_terminal_is_vacuous() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    let u = path(&dir, "u.txt");
    let h = path(&dir, "h.txt");
    let log = path(&dir, "log.json");
    ok(&["gen", "--kind", "gnm", "--n", "200", "--m", "800", "-o", s(&g)]);
    fs::write(&u, "17\n").unwrap();
    ok(&["build", "--graph", s(&g), "--alg", "subset", "--terminals", s(&u), "--eps", "0.25", "-o", s(&h), "--log", s(&log)]);
    assert_eq!(json(&log)["log"]["paths"], 0);
    let none = path(&dir, "none.txt");
    fs::write(&none, "").unwrap();
    ok(&["verify", "--graph", s(&g), "--spanner", s(&h), "--pairs", s(&none)]);
}

#[test]
fn additive_preset_logs_its_schedule() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    let h = path(&dir, "h.txt");
    let log = path(&dir, "log.json");
    ok(&["gen", "--kind", "geometric", "--n", "600", "--seed", "2", "-o", s(&g)]);
    ok(&["build", "--graph", s(&g), "--alg", "additive", "--preset", "0403", "-o", s(&h), "--log", s(&log)]);
    let log = json(&log);
    assert_eq!(log["schema"], 1);
    assert_eq!(log["command"], "build");
    let rho = log["log"]["schedule"]["rho"].as_array().unwrap();
    assert_eq!(rho.len(), 4);
    assert!(rho.last().unwrap().as_f64().unwrap() < 0.403);
    assert_eq!(log["edges"].as_u64().unwrap() as usize, edge_lines(&h).len());
    ok(&["verify", "--graph", s(&g), "--spanner", s(&h)]);
}

#[test]
fn additive_without_a_schedule_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    ok(&["gen", "--kind", "cycle", "--n", "20", "-o", s(&g)]);
    let out = spanners(&["build", "--graph", s(&g), "--alg", "additive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_fails_and_reports() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    let report = path(&dir, "report.json");
    fs::write(&g, "0 1\n1 2\n2 3\n3 0\n3 4\n").unwrap();
    let out = ok(&["verify", "--graph", s(&g), "--spanner", s(&g), "--report", s(&report)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("passed=true"));
    let r = json(&report);
    assert_eq!((r["schema"].clone(), r["passed"].clone()), (Value::from(1), Value::from(true)));

    // Dropping the bridge disconnects vertex 4.
    let cut = path(&dir, "cut.txt");
    fs::write(&cut, "0 1\n1 2\n2 3\n3 0\n").unwrap();
    assert_eq!(spanners(&["verify", "--graph", s(&g), "--spanner", s(&cut)]).status.code(), Some(4));

    // An edge missing from the graph.
    let extra = path(&dir, "extra.txt");
    fs::write(&extra, "0 1\n0 2\n").unwrap();
    assert_eq!(spanners(&["verify", "--graph", s(&g), "--spanner", s(&extra)]).status.code(), Some(4));

    // Within +1 but not exact.
    let cycle_cut = path(&dir, "cc.txt");
    fs::write(&cycle_cut, "0 1\n1 2\n2 3\n3 4\n").unwrap();
    assert_eq!(spanners(&["verify", "--graph", s(&g), "--spanner", s(&cycle_cut), "--max-error", "0"]).status.code(), Some(4));
    ok(&["verify", "--graph", s(&g), "--spanner", s(&cycle_cut), "--max-error", "2"]);
}

#[test]
fn allpairs6_verifies_within_six() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    let h = path(&dir, "h.txt");
    let csv = path(&dir, "rows.csv");
    ok(&["gen", "--kind", "gnm", "--n", "400", "--m", "2400", "--seed", "5", "-o", s(&g)]);
    ok(&["build", "--graph", s(&g), "--alg", "allpairs6", "-o", s(&h)]);
    ok(&["verify", "--graph", s(&g), "--spanner", s(&h), "--max-error", "6", "--csv", s(&csv)]);
    assert!(fs::read_to_string(csv).unwrap().lines().count() > 1);
}

#[test]
fn pairwise_algorithms_need_pairs() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    let p = path(&dir, "p.txt");
    let h = path(&dir, "h.txt");
    ok(&["gen", "--kind", "gnm", "--n", "300", "--m", "1200", "-o", s(&g)]);
    assert_eq!(spanners(&["build", "--graph", s(&g), "--alg", "preserver"]).status.code(), Some(2));
    fs::write(&p, "0 17\n5 250\n9 9\n").unwrap();
    ok(&["build", "--graph", s(&g), "--alg", "preserver", "--pairs", s(&p), "-o", s(&h)]);
    ok(&["verify", "--graph", s(&g), "--spanner", s(&h), "--pairs", s(&p), "--max-error", "0"]);
}

#[test]
fn bench_writes_data_and_summary_rows() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "bench.csv");
    ok(&["bench", "--kind", "cycle", "--n", "64", "--alg", "identity", "-o", s(&csv)]);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("row,kind,n,m,algorithm"));
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("data,cycle,64,64,identity"));
    assert!(lines[2].starts_with("summary,cycle"));
}

#[test]
fn identity_edge_slope_is_one() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "bench.csv");
    ok(&["bench", "--kind", "gnm", "--edges-per-vertex", "3", "--n", "128,256,512,1024", "--alg", "identity", "-o", s(&csv)]);
    let text = fs::read_to_string(&csv).unwrap();
    let summary = text.lines().find(|l| l.starts_with("summary")).unwrap();
    let fields: Vec<&str> = summary.split(',').collect();
    let slope: f64 = fields[11].parse().unwrap();
    assert!((slope - 1.0).abs() < 1e-3, "{summary}");
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(spanners(&["gen", "--kind", "hexagon"]).status.code(), Some(2));
    assert_eq!(spanners(&["build", "--graph", "/nonexistent/g.txt", "--alg", "identity"]).status.code(), Some(2));
    assert_eq!(spanners(&["bench", "--kind", "cycle", "--n", "64", "--alg", "identity", "--seeds", "0"]).status.code(), Some(2));
}
