use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const A2: &str = "n 2\nedge 1 2 3\nroot 2\n";
const A4: &str = "n 4\nedge 1 2 3\nedge 2 3 3\nedge 3 4 3\nroot 4\n";
const B3: &str = "n 3\nedge 1 2 4\nedge 2 3 3\nroot 3\n";
const AT2: &str = "n 3\nedge 1 2 3\nedge 2 3 3\nedge 3 1 3\nmode cycle\nroot 1\n";
const TWO_BRANCHES: &str =
    "n 6\nedge 1 3 3\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 4 6 3\nroot 6\n";
const DT: &str = "# two forks joined by a path\nn 11\n\
    edge 1 3 3\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 5 6 3\nedge 6 7 3\n\
    edge 7 8 3\nedge 8 9 3\nedge 9 10 3\nedge 9 11 3\nroot 6\n";
const DT_V: &str = "4 5 10 11 6 7 8 9 5 4 2 1";

fn graph(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolkl"))
        .args(args)
        .output()
        .unwrap()
}

fn run_on(text: &str, args: &[&str]) -> Output {
    let g = graph(text);
    let path = g.path().to_str().unwrap().to_string();
    let mut all: Vec<&str> = args.to_vec();
    all.push("--graph");
    all.push(&path);
    run(&all)
}

fn stdout(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stdout).lines().map(String::from).collect()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn branching_pair_matches() {
    let o = run_on(DT, &["kl", "--v", DT_V, "--u", "8 6 1", "--J", "5,7", "--method", "both"]);
    assert_eq!(stdout(&o), ["q", "q", "MATCH"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn branching_pair_diagram() {
    let o = run_on(DT, &["kl", "--v", DT_V, "--u", "8 6 1", "--J", "5,7", "--show-diagram"]);
    let lines = stdout(&o);
    assert_eq!(lines.len(), 14);
    assert!(lines.contains(&"s5 [o] top=2 bottom=0 parent=s6".to_string()));
    assert_eq!(lines[10], "s6 [x] top=1l bottom=1l parent=-");
}

#[test]
fn trivial_pairs() {
    let o = run_on(A2, &["kl", "--v", "1 2 1", "--u", "1 2 1", "--method", "closed"]);
    assert_eq!(stdout(&o), ["1"]);
    let o = run_on(A2, &["kl", "--v", "1 2", "--u", "2 1", "--method", "both"]);
    assert_eq!(stdout(&o), ["0", "0", "MATCH"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn zero_based_names_shift() {
    let a = run_on(AT2, &["kl", "--zero-based", "--v", "0 1 2 1 0", "--u", "0"]);
    let b = run_on(AT2, &["kl", "--v", "1 2 3 2 1", "--u", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn enumerate_counts() {
    assert_eq!(stdout(&run_on(A2, &["enumerate"])).len(), 6);
    assert_eq!(stdout(&run_on("n 1\nroot 1\n", &["enumerate"])), ["0 e", "1 1"]);
    assert_eq!(stdout(&run_on(A2, &["enumerate", "--J", "1"])).len(), 3);
}

#[test]
fn enumerate_order() {
    let lines = stdout(&run_on(A2, &["enumerate"]));
    assert_eq!(lines, ["0 e", "1 1", "1 2", "2 1 2", "2 2 1", "3 1 2 1"]);
}

#[test]
fn catalan_rows() {
    assert_eq!(stdout(&run(&["catalan", "4"])), ["f_4 = 2q^2+3q+1; row: 2 3 1"]);
    assert_eq!(stdout(&run(&["catalan", "0"])), ["f_0 = 1; row: 1"]);
    assert!(stdout(&run(&["catalan", "9"]))[0].ends_with("row: 42 48 27 8 1"));
}

fn verify(text: &str, scope: &str) -> Output {
    run_on(text, &["verify", "--scope", scope])
}

#[test]
fn verify_sweeps_pass() {
    for (g, scope) in [(A4, "kl"), (B3, "mu"), (A2, "poincare"), (B3, "perm"), (AT2, "kl")] {
        let o = verify(g, scope);
        let lines = stdout(&o);
        assert!(lines.contains(&"mismatches=0".to_string()), "{scope}: {lines:?}");
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn verify_counts_admissible_triples() {
    let lines = stdout(&verify(A4, "kl"));
    assert!(lines.contains(&"pairs=3506".to_string()));
    assert!(lines.contains(&"truncated=false".to_string()));
    assert!(lines.last().unwrap().starts_with("summary: PASS"));
}

#[test]
fn verify_is_deterministic() {
    let g = graph(B3);
    let path = g.path().to_str().unwrap();
    let a = run(&["verify", "--graph", path]);
    let b = run(&["verify", "--graph", path]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).starts_with("wall_time="));
}

#[test]
fn verify_truncates() {
    let o = run_on(A4, &["verify", "--max-pairs", "10"]);
    let lines = stdout(&o);
    assert!(lines.contains(&"pairs=10".to_string()));
    assert!(lines.contains(&"truncated=true".to_string()));
}

#[test]
fn mismatches_exit_3() {
    let o = run_on(TWO_BRANCHES, &["verify", "--scope", "poincare", "--max-pairs", "4"]);
    assert_eq!(code(&o), 3);
    let lines = stdout(&o);
    let found: Vec<&String> = lines.iter().filter(|l| l.starts_with("mismatch ")).collect();
    assert_eq!(found.len(), 4);
    assert!(found[0].contains(" v=e "));
    assert!(found[3].contains(" v=3 "));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&run_on(A2, &["kl", "--v", "1 2 3"])), 2);
    assert_eq!(code(&run_on("n 2\nedge 1 2 2\n", &["enumerate"])), 2);
    assert_eq!(code(&run(&["kl", "--graph", "/nonexistent/graph", "--v", "1"])), 2);
    assert_eq!(code(&run_on(A4, &["kl", "--v", "1 2 3 4 3 2 1 2"])), 2);
    assert_eq!(code(&run(&["perm", "--family", "a", "--v", "1,1,2"])), 2);
    let o = run_on(A4, &["verify", "--scope", "poincare"]);
    assert_eq!(code(&o), 0);
    let o = run_on(TWO_BRANCHES, &["poincare", "--v", "1", "--method", "closed"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn budget_exit_4() {
    let o = run_on(DT, &["--budget", "2", "kl", "--v", DT_V, "--u", "8 6 1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn poincare_methods_agree() {
    let o = run_on(B3, &["poincare", "--v", "1 2 3 2 1", "--show-diagram"]);
    let lines = stdout(&o);
    assert_eq!(code(&o), 0);
    assert_eq!(lines.last().unwrap(), "MATCH");
    assert!(lines.iter().any(|l| l.starts_with("component root=s3")));
}

#[test]
fn perm_queries() {
    let o = run(&["perm", "--family", "b", "--v", "-3,2,-1", "--method", "both"]);
    assert_eq!(stdout(&o)[2..], ["q+1", "q+1", "MATCH"]);
    let o = run(&["perm", "--family", "b", "--v", "-1,2,3", "--variant", "t2"]);
    assert_eq!(code(&o), 0);
    let o = run(&["perm", "--family", "d", "--v", "1,2,3", "--variant", "t2"]);
    assert_eq!(code(&o), 2);
    let o = run(&["perm", "--family", "b", "--v", "-1,2,3", "--J", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn json_lines_mirror_text() {
    let o = run(&["--format", "json-lines", "catalan", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)[0]).unwrap();
    assert_eq!(v["f"], "2q^2+3q+1");
    assert_eq!(v["row"], serde_json::json!([2, 3, 1]));
    let o = run_on(A2, &["verify", "--scope", "kl", "--format", "json-lines"]);
    for line in stdout(&o) {
        serde_json::from_str::<serde_json::Value>(&line).unwrap();
    }
}
