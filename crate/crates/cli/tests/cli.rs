use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dpasp::graph::{build_semi_incidence, parse_graph};
use dpasp::parser::parse_text;
use dpasp::program::Interpretation;
use dpasp::td::parse_td;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn dpasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpasp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_running_example() {
    for engine in ["single", "multipass"] {
        let o = dpasp(&["count", path_str(&data("running.lp")), "--engine", engine]);
        assert_eq!(code(&o), 10);
        assert_eq!(stdout(&o), "7\n");
    }
    let o = dpasp(&["count", path_str(&data("running.lp")), "--oracle"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (10, "7\n"));
}

#[test]
fn enumerate_lists_certified_answer_sets() {
    let src = std::fs::read_to_string(data("running.lp")).unwrap();
    let p = parse_text(&src).unwrap();
    let mut outputs = Vec::new();
    for engine in ["single", "multipass"] {
        let o = dpasp(&["enumerate", path_str(&data("running.lp")), "--engine", engine]);
        assert_eq!(code(&o), 10);
        let mut lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
        assert_eq!(lines.len(), 7);
        for line in &lines {
            let m = Interpretation::new(line.split_whitespace().map(|n| p.atom_by_name(n).unwrap()));
            assert!(p.is_answer_set(&m), "{line}");
        }
        lines.sort();
        outputs.push(lines);
    }
    assert_eq!(outputs[0], outputs[1]);
    let o = dpasp(&["enumerate", path_str(&data("running.lp")), "--limit", "3"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn solve_prints_set_and_cost() {
    let o = dpasp(&["solve", path_str(&data("running.lp"))]);
    assert_eq!(code(&o), 10);
    let out = stdout(&o);
    let mut lines = out.lines();
    let p = parse_text(&std::fs::read_to_string(data("running.lp")).unwrap()).unwrap();
    let m = Interpretation::new(lines.next().unwrap().split_whitespace().map(|n| p.atom_by_name(n).unwrap()));
    assert!(p.is_answer_set(&m));
    assert_eq!(lines.next(), Some("cost: 0"));
}

#[test]
fn unsatisfiable_input_exits_20() {
    for engine in ["single", "multipass"] {
        let o = dpasp(&["solve", path_str(&data("unsat.sm")), "--engine", engine]);
        assert_eq!(code(&o), 20);
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn steiner_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("edge.gr");
    std::fs::write(&gr, "p tw 2 1\n1 2\n").unwrap();
    let o = dpasp(&["bench-steiner", path_str(&gr), "--terminals", "2"]);
    assert_eq!(code(&o), 0);
    let program = dir.path().join("edge.lp");
    std::fs::write(&program, stdout(&o)).unwrap();
    let o = dpasp(&["solve", path_str(&program)]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout(&o), "a_1 a_2 e_1_2\ncost: 1\n");
}

#[test]
fn steiner_grid_engines_agree_with_oracle() {
    let o = dpasp(&["bench-steiner", "--grid", "2x3", "--terminals", "3", "--seed", "4"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let program = dir.path().join("grid.lp");
    std::fs::write(&program, stdout(&o)).unwrap();
    let want = stdout(&dpasp(&["count", path_str(&program), "--oracle"]));
    for engine in ["single", "multipass"] {
        let o = dpasp(&["count", path_str(&program), "--engine", engine, "--all-tds-agree"]);
        assert_eq!(code(&o), 10);
        assert_eq!(stdout(&o), want);
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&dpasp(&["solve"])), 1);
    assert_eq!(code(&dpasp(&["frobnicate"])), 1);
    assert_eq!(code(&dpasp(&["solve", "/nonexistent/program.lp"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lp");
    std::fs::write(&bad, "a :- b\n").unwrap();
    assert_eq!(code(&dpasp(&["solve", path_str(&bad)])), 1);
    assert_eq!(code(&dpasp(&["--help"])), 0);
}

#[test]
fn too_wide_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.lp");
    let head: Vec<String> = (0..35).map(|i| format!("x{i}")).collect();
    std::fs::write(&wide, format!("{{{}}}.\n", head.join("; "))).unwrap();
    assert_eq!(code(&dpasp(&["count", path_str(&wide)])), 2);
}

#[test]
fn stats_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.json");
    let o = dpasp(&["count", path_str(&data("running.lp")), "--stats-json", path_str(&stats)]);
    assert_eq!(code(&o), 10);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        ["answerCount", "engine", "optimalCost", "peakRows", "perPassSeconds", "seed", "totalSeconds", "widthUsed"]
    );
    assert_eq!(v["answerCount"], "7");
    assert_eq!(v["optimalCost"], 0);
    assert_eq!(v["engine"], "multipass");
    assert!(v["widthUsed"].as_u64().is_some() && v["peakRows"].as_u64().unwrap() > 0);
    for pass in ["td", "p1", "p2", "p3"] {
        assert!(v["perPassSeconds"][pass].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn decompose_golden_outputs() {
    for (input, golden) in [("running.lp", "running.td"), ("path.gr", "path.td"), ("grid.gr", "grid.td")] {
        let want = std::fs::read_to_string(data(golden)).unwrap();
        let (td, n) = parse_td(&want).unwrap();
        let src = std::fs::read_to_string(data(input)).unwrap();
        let g = if input.ends_with(".gr") {
            parse_graph(&src).unwrap()
        } else {
            build_semi_incidence(&parse_text(&src).unwrap()).graph
        };
        assert_eq!(n, g.vertex_count());
        td.validate(&g).unwrap();
        let o = dpasp(&["decompose", path_str(&data(input))]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), want, "{input}");
    }
}

#[test]
fn decomposition_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let td = dir.path().join("used.td");
    let o = dpasp(&["count", path_str(&data("running.lp")), "--td-out", path_str(&td), "--seed", "3"]);
    assert_eq!(code(&o), 10);
    let o = dpasp(&["count", path_str(&data("running.lp")), "--td-in", path_str(&td), "--engine", "single"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (10, "7\n"));
    let wrong = dir.path().join("wrong.td");
    std::fs::write(&wrong, "s td 1 1 3\nb 1 1 2 3\n").unwrap();
    assert_eq!(code(&dpasp(&["count", path_str(&data("running.lp")), "--td-in", path_str(&wrong)])), 1);
}

#[test]
fn crosscheck_reports_agreement() {
    let o = dpasp(&["crosscheck", path_str(&data("running.lp"))]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("engine Single: agrees") && out.contains("engine Multipass: agrees"), "{out}");
    let dir = tempfile::tempdir().unwrap();
    let disj = dir.path().join("disj.lp");
    std::fs::write(&disj, "a | b. c :- a, not b. :- c, b.\n").unwrap();
    let o = dpasp(&["crosscheck", path_str(&disj)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("reduction: agrees"));
}

#[test]
fn reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_dpasp"))
        .args(["count", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{a; b}.\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!((code(&o), stdout(&o).as_str()), (10, "4\n"));
}
