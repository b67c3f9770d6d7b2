//! End-to-end runs of the binary: payloads and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_metric-engine"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PATH5: &str = "# five-vertex path\np 5 4\n0 1 1\n1 2 2\n2 3 1\n3 4 3\n";

#[test]
fn gen_grid_golden() {
    let o = run(&["gen", "--family", "grid", "--rows", "2", "--cols", "2"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "# Grid { rows: 2, cols: 2 } weights unit seed 0\np 4 4\n0 1 1\n0 2 1\n1 3 1\n2 3 1\n"
    );
}

#[test]
fn gen_is_deterministic_and_writes_files() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = run(&[
            "gen", "--family", "grid", "--rows", "16", "--cols", "16", "--weights", "uniform:1:10", "--seed", "7",
            "-o", s(p),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn diameter_radius_and_exact() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", PATH5);
    let exact = run(&["exact", "--what", "diameter", s(&g)]);
    assert_eq!(stdout(&exact).trim(), "7");
    let o = run(&["diameter", "--eps", "0.25", s(&g)]);
    assert!(o.status.success());
    let d: f64 = stdout(&o).trim().parse().unwrap();
    assert!((d - 7.0).abs() <= 0.25 * 7.0);
    let r = run(&["radius", "--eps", "0.25", s(&g)]);
    let r: f64 = stdout(&r).trim().parse().unwrap();
    assert!((r - 4.0).abs() <= 0.25 * 7.0);
    let ecc = run(&["exact", "--what", "ecc", s(&g)]);
    assert_eq!(stdout(&ecc), "0 7\n1 6\n2 4\n3 4\n4 7\n");
}

#[test]
fn json_payloads_carry_schema() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", PATH5);
    let o = run(&["--json", "diameter", "--eps", "0.5", s(&g)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "v1");
    assert!(v["diameter"].as_f64().unwrap() >= 7.0 * 0.5);

    let o = run(&["ecc", "--eps", "0.5", s(&g)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (k, exact) in [7.0, 6.0, 4.0, 4.0, 7.0].iter().enumerate() {
        assert_eq!(rows[k]["vertex"], k as u64);
        assert!((rows[k]["value"].as_f64().unwrap() - exact).abs() <= 0.5 * 7.0);
    }
}

#[test]
fn sparse_ids_are_remapped_in_output() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "ids.txt", "p 3 2\n10 20 1\n20 30 1\n");
    let o = run(&["ecc", "--eps", "0.5", s(&g)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["vertex"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![10, 20, 30]);
    let q = write(&dir, "q.txt", "10 30\n");
    let o = run(&["oracle-query", "--eps", "0.5", s(&g), s(&q)]);
    let x: f64 = stdout(&o).trim().parse().unwrap();
    assert!((2.0..=2.0 + 0.5 * 2.0 / 8.0).contains(&x));
}

#[test]
fn oracle_answers_sandwich_exact() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    run(&["gen", "--family", "grid", "--rows", "9", "--cols", "9", "--weights", "uniform:1:10", "--seed", "2", "-o", s(&g)]);
    let q = write(&dir, "q.txt", "0 80\n# comment\n\n4 4\n17 63\n");
    let exact = metric_engine::exact_apsp(&metric_engine::load_graph_file::<f64>(&g).unwrap().graph).unwrap();
    let pairs = [(0, 80), (4, 4), (17, 63)];
    let add = run(&["oracle-query", "--eps", "0.25", s(&g), s(&q)]);
    let mult = run(&["mult-oracle", "--eps", "0.25", s(&g), s(&q)]);
    let lazy = run(&["mult-oracle", "--eps", "0.25", "--lazy", s(&g), s(&q)]);
    assert!(add.status.success() && mult.status.success() && lazy.status.success());
    assert_eq!(stdout(&mult), stdout(&lazy));
    let a: Vec<f64> = stdout(&add).lines().map(|l| l.parse().unwrap()).collect();
    let m: Vec<f64> = stdout(&mult).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(a.len(), 3);
    let d0 = exact.row(0).iter().copied().fold(0.0, f64::max);
    for (k, &(u, v)) in pairs.iter().enumerate() {
        let d = exact.dist(u, v);
        assert!(d <= a[k] && a[k] <= d + 0.25 * d0 / 8.0, "{u} {v}: {} vs {d}", a[k]);
        assert!(d <= m[k] && m[k] <= 1.25 * d, "{u} {v}: {} vs {d}", m[k]);
    }
}

#[test]
fn out_of_range_query_reports_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", PATH5);
    let q = write(&dir, "q.txt", "0 1\n0 9\n");
    let o = run(&["oracle-query", "--eps", "0.5", s(&g), s(&q)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = run(&["mult-oracle", "--eps", "0.5", s(&g), s(&q)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn disconnected_graphs() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "d.txt", "p 3 1\n0 1 1\n");
    for cmd in ["diameter", "radius"] {
        let o = run(&[cmd, "--eps", "0.5", s(&g)]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "inf");
    }
    let o = run(&["ecc", "--eps", "0.5", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["exact", "--what", "diameter", s(&g)]);
    assert_eq!(stdout(&o).trim(), "inf");
    let o = run(&["apex-diameter", "--eps", "0.5", "--apices", "2", s(&g)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["estimate"], "inf");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", PATH5);
    assert_eq!(run(&["diameter", "--bogus", s(&g)]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["diameter", "--eps", "0", s(&g)]).status.code(), Some(1));
    assert_eq!(run(&["diameter", "--eps", "0.5", "missing.txt"]).status.code(), Some(1));

    let bad = write(&dir, "neg.txt", "p 2 1\n0 1 -1\n");
    let o = run(&["diameter", "--eps", "0.5", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
    let dup = write(&dir, "dup.txt", "p 2 2\n0 1 2\n1 0 3\n");
    assert_eq!(run(&["diameter", "--eps", "0.5", s(&dup)]).status.code(), Some(1));

    let o = bin()
        .args(["exact", "--what", "radius", s(&g)])
        .env("METRIC_ENGINE_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("capacity"));
}

#[test]
fn apex_diameter_json() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("a.txt");
    let o = run(&[
        "gen", "--family", "grid_apex", "--rows", "8", "--cols", "8", "--apices", "2", "--attach", "0.1", "--seed", "3",
        "-o", s(&g),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let exact: f64 = stdout(&run(&["exact", "--what", "diameter", s(&g)])).trim().parse().unwrap();
    // Apex ids come from the file comment when not given.
    for extra in [vec![], vec!["--apices", "64,65"]] {
        let mut args = vec!["apex-diameter", "--eps", "0.5"];
        args.extend(extra);
        args.push(s(&g));
        let o = run(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["schema"], "v1");
        assert_eq!(v["apices"], serde_json::json!([64, 65]));
        let est = v["estimate"].as_f64().unwrap();
        assert!(est <= 1.5 * exact && exact <= 1.5 * est);
        assert_eq!(v["steps"].as_u64().unwrap() as usize, v["verdicts"].as_array().unwrap().len());
    }
    let o = run(&["apex-diameter", "--eps", "0.5", "--apices", "99", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_echoes_digest_and_guarantees() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", PATH5);
    let r = dir.path().join("r.json");
    let o = run(&["diameter", "--eps", "0.25", "--report", s(&r), s(&g)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["command"], "diameter");
    // sha256 of PATH5.
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
    for gu in v["guarantees"].as_array().unwrap() {
        assert!(gu["slack"].as_f64().unwrap() >= 0.0, "{gu}");
    }
}

#[test]
fn accept_single_criterion() {
    let o = run(&["accept", "--criterion", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("criterion  5 PASS"), "{out}");
    assert!(out.contains("1 of 1 criteria passed"));
    assert_eq!(run(&["accept", "--criterion", "11"]).status.code(), Some(1));
}
