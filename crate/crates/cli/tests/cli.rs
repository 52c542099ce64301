use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_bstorder");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let r = run(dir, args);
    assert_eq!(r.code, 0, "{args:?} failed: {}{}", r.stderr, r.stdout);
    let v = r.json();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verification"]["passed"], true);
    v
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn digraph(n: usize, arcs: &[(usize, usize)]) -> String {
    let mut s = format!("p dtw {n} {}\n", arcs.len());
    for (u, v) in arcs {
        s.push_str(&format!("a {u} {v}\n"));
    }
    s
}

fn transitive(n: usize) -> String {
    let arcs: Vec<_> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    digraph(n, &arcs)
}

/// Tournament from a xorshift stream, so the tests need no RNG crate.
fn pseudo_random(n: usize, mut state: u64) -> String {
    let mut arcs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            arcs.push(if state & 1 == 0 { (i, j) } else { (j, i) });
        }
    }
    digraph(n, &arcs)
}

fn arcs_of(text: &str) -> Vec<(usize, usize)> {
    text.lines()
        .filter_map(|l| l.strip_prefix("a "))
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

fn ids(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

fn setup() -> (TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_path_buf();
    write(&dir, "c3.dtw", &digraph(3, &[(1, 2), (2, 3), (3, 1)]));
    write(&dir, "t16.dtw", &transitive(16));
    write(&dir, "perm.txt", "s 5\n3 1 4 5 2\n");
    (tmp, dir)
}

#[test]
fn eq_generator_of_31452_has_the_expected_down_arcs() {
    let (_tmp, dir) = setup();
    let v = ok(&dir, &["obstruct", "gen", "--kind", "eq", "--perm", "perm.txt", "-o", "f.dtw"]);
    let (x, y) = (ids(&v["result"]["roles"]["x"]), ids(&v["result"]["roles"]["y"]));
    let arcs = arcs_of(&fs::read_to_string(dir.join("f.dtw")).unwrap());
    let mut down: Vec<(usize, usize)> = Vec::new();
    for (j, &yj) in y.iter().enumerate() {
        for (i, &xi) in x.iter().enumerate() {
            if arcs.contains(&(yj, xi)) {
                down.push((j + 1, i + 1));
            }
        }
    }
    down.sort();
    assert_eq!(down, vec![(1, 2), (2, 5), (3, 1), (4, 3), (5, 4)]);
    assert_eq!(v["output"]["path"], "f.dtw");
}

#[test]
fn decode_roundtrips_the_extended_generator() {
    let (_tmp, dir) = setup();
    ok(&dir, &["obstruct", "gen", "--kind", "eq", "--perm", "perm.txt", "--extend", "-o", "fx.dtw"]);
    let v = ok(&dir, &["obstruct", "decode", "--kind", "eq", "--input", "fx.dtw", "-o", "back.txt"]);
    assert_eq!(ids(&v["result"]["perm"]), vec![3, 1, 4, 5, 2]);
    assert_eq!(fs::read_to_string(dir.join("back.txt")).unwrap(), "s 5\n3 1 4 5 2\n");
}

#[test]
fn every_kind_roundtrips() {
    let (_tmp, dir) = setup();
    for kind in ["eq", "le", "ge"] {
        ok(&dir, &["obstruct", "gen", "--kind", kind, "--perm", "perm.txt", "--extend", "-o", "g.dtw"]);
        let v = ok(&dir, &["obstruct", "decode", "--kind", kind, "--input", "g.dtw"]);
        assert_eq!(ids(&v["result"]["perm"]), vec![3, 1, 4, 5, 2], "{kind}");
    }
}

#[test]
fn enumerate_emits_a_table() {
    let (_tmp, dir) = setup();
    let v = ok(&dir, &["obstruct", "enumerate", "--kind", "eq", "--m-max", "3"]);
    let table = v["result"]["table"].as_array().unwrap();
    assert!(!table.is_empty());
    for row in table {
        assert!(row["m"].is_u64() && row["count_distinct"].is_u64() && row["all_rigid"].is_boolean());
    }
}

#[test]
fn fo_check_domination_on_c3() {
    let (_tmp, dir) = setup();
    write(
        &dir,
        "ds2.sexp",
        "(exists (x1 x2) (forall (y) (or (arc y x1) (= y x1) (arc y x2) (= y x2))))\n",
    );
    let v = ok(&dir, &["fo", "check", "--formula", "ds2.sexp", "--input", "c3.dtw"]);
    assert_eq!(v["result"]["value"], true);
    let r = run(&dir, &["--emit", "text", "fo", "check", "--ds", "2", "--input", "c3.dtw"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
    // one vertex cannot dominate a 3-cycle, and removing one vertex breaks it
    assert_eq!(ok(&dir, &["fo", "check", "--ds", "1", "--input", "c3.dtw"])["result"]["value"], false);
    assert_eq!(ok(&dir, &["fo", "check", "--fvs", "1", "--input", "c3.dtw"])["result"]["value"], true);
    assert_eq!(ok(&dir, &["fo", "check", "--fvs", "0", "--input", "c3.dtw"])["result"]["value"], false);
}

#[test]
fn fo_formula_sources_are_exclusive() {
    let (_tmp, dir) = setup();
    assert_eq!(run(&dir, &["fo", "check", "--ds", "1", "--fvs", "1", "--input", "c3.dtw"]).code, 1);
    assert_eq!(run(&dir, &["fo", "check", "--input", "c3.dtw"]).code, 1);
}

#[test]
fn approx_on_transitive_and_c3() {
    let (_tmp, dir) = setup();
    let v = ok(&dir, &["tww", "approx", "--input", "t16.dtw", "--k", "2"]);
    assert_eq!(v["result"]["witness"], "contraction");
    assert_eq!(v["result"]["width"], 0);
    let v = ok(&dir, &["tww", "approx", "--input", "c3.dtw", "-o", "c3.cs"]);
    assert_eq!(v["result"]["witness"], "contraction");
    assert_eq!(v["result"]["width"], 1);
    let v = ok(&dir, &["tww", "check", "--input", "c3.dtw", "--sequence", "c3.cs"]);
    assert_eq!(v["result"]["width"], 1);
    assert_eq!(ok(&dir, &["tww", "exact", "--input", "c3.dtw"])["result"]["twin_width"], 1);
}

#[test]
fn approx_rejects_oriented_kind() {
    let (_tmp, dir) = setup();
    let r = run(&dir, &["tww", "approx", "--input", "c3.dtw", "--kind", "oriented"]);
    assert_eq!(r.code, 2);
}

#[test]
fn malformed_input_cites_the_line() {
    let (_tmp, dir) = setup();
    write(&dir, "bad.dtw", "p dtw 3 3\na 1 2\nb 2 3\na 3 1\n");
    let r = run(&dir, &["tww", "approx", "--input", "bad.dtw"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["error"]["kind"], "input");
    assert_eq!(v["error"]["code"], 2);
}

#[test]
fn missing_arc_is_reported_one_based() {
    let (_tmp, dir) = setup();
    write(&dir, "gap.dtw", &digraph(3, &[(1, 2), (2, 3)]));
    let r = run(&dir, &["tww", "approx", "--input", "gap.dtw"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("between 1 and 3") || r.stderr.contains("between 3 and 1"), "{}", r.stderr);
}

#[test]
fn extraction_contract() {
    let (_tmp, dir) = setup();
    write(&dir, "t5.dtw", &transitive(5));
    let r = run(&dir, &["extract", "--input", "t5.dtw", "--family", "singletons", "--k", "1", "--enforce-budget"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("budget(1) = 13"), "{}", r.stderr);

    let v = ok(&dir, &["extract", "--input", "t5.dtw", "--family", "singletons", "--k", "0"]);
    assert_eq!(v["result"]["meets_k"], true);
    assert_eq!(v["result"]["budget"], 1);

    write(&dir, "r40.dtw", &pseudo_random(40, 0x9e37_79b9_7f4a_7c15));
    let v = ok(
        &dir,
        &["extract", "--input", "r40.dtw", "--family", "singletons", "--k", "1", "--enforce-budget", "-o", "p.fam"],
    );
    let selected = v["result"]["selected"].as_array().unwrap().len();
    assert!(selected >= 1);
    let fam = fs::read_to_string(dir.join("p.fam")).unwrap();
    assert_eq!(fam.lines().next().unwrap(), format!("f {selected}"));
}

#[test]
fn extraction_with_tree_and_family_files() {
    let (_tmp, dir) = setup();
    write(&dir, "r30.dtw", &pseudo_random(30, 77));
    let v = ok(&dir, &["bst", "build", "--input", "r30.dtw", "--strategy", "median", "-o", "r30.bst"]);
    let order = ids(&v["result"]["order"]);
    // consecutive pairs of the BST order
    let mut fam = format!("f {}\n", order.len() / 2);
    for pair in order.chunks(2).filter(|c| c.len() == 2) {
        fam.push_str(&format!("{} {}\n", pair[0], pair[1]));
    }
    write(&dir, "pairs.fam", &fam);
    let v = ok(&dir, &["extract", "--input", "r30.dtw", "--bst", "r30.bst", "--family", "pairs.fam", "--k", "1", "--enforce-budget"]);
    assert!(!v["result"]["selected"].as_array().unwrap().is_empty());
    let same = ok(&dir, &["extract", "--input", "r30.dtw", "--bst", "build:median", "--family", "chunks:2", "--k", "1"]);
    assert_eq!(same["result"]["selected"], v["result"]["selected"]);
}

#[test]
fn bst_check_reports_violations() {
    let (_tmp, dir) = setup();
    ok(&dir, &["bst", "build", "--input", "c3.dtw", "-o", "c3.bst"]);
    let v = ok(&dir, &["bst", "check", "--input", "c3.dtw", "--tree", "c3.bst"]);
    assert_eq!(v["result"]["valid"], true);
    // a path 1 -> 2 -> 3 on the right contradicts the arc 3 -> 1
    write(&dir, "wrong.bst", "t 3 binary\nr 1\nv 1 0 2\nv 2 0 3\nv 3 0 0\n");
    let v = ok(&dir, &["bst", "check", "--input", "c3.dtw", "--tree", "wrong.bst"]);
    assert_eq!(v["result"]["valid"], false);
    assert!(v["result"]["violation"].as_str().unwrap().contains("node"));
}

#[test]
fn pipeline_stops_at_rank_division() {
    let (_tmp, dir) = setup();
    for k in ["2", "3", "5"] {
        let v = ok(&dir, &["grid-pipeline", "--input", "t16.dtw", "--k", k]);
        assert_eq!(v["result"]["status"], "not-found");
        assert_eq!(v["result"]["failed_stage"], "rank-division");
    }
    write(&dir, "one.dtw", "p dtw 1 0\n");
    let v = ok(&dir, &["grid-pipeline", "--input", "one.dtw"]);
    assert_eq!(v["result"]["status"], "not-found");
    assert_eq!(v["result"]["failed_stage"], "rank-division");
}

#[test]
fn pipeline_on_a_grid_generator() {
    let (_tmp, dir) = setup();
    write(&dir, "grid3.txt", "s 9\n1 4 7 2 5 8 3 6 9\n");
    ok(&dir, &["obstruct", "gen", "--kind", "eq", "--perm", "grid3.txt", "--extend", "-o", "g.dtw"]);
    let v = ok(&dir, &["grid-pipeline", "--input", "g.dtw", "--k", "1"]);
    let status = v["result"]["status"].as_str().unwrap();
    assert!(["complete", "partial", "not-found", "unknown", "failed"].contains(&status));
    if v["result"].get("failed_stage").is_some() {
        assert!(["rank-division", "extraction"].contains(&v["result"]["failed_stage"].as_str().unwrap()));
    }
}

#[test]
fn matrix_and_permutation_commands() {
    let (_tmp, dir) = setup();
    write(&dir, "grid3.txt", "s 9\n1 4 7 2 5 8 3 6 9\n");
    let v = ok(&dir, &["perm", "grid", "--input", "grid3.txt"]);
    assert_eq!(v["result"]["max_grid"], 3);
    write(&dir, "p21.txt", "s 2\n2 1\n");
    let v = ok(&dir, &["perm", "pattern", "--input", "perm.txt", "--pattern", "p21.txt"]);
    assert_eq!(v["result"]["found"], true);
    assert_eq!(ids(&v["result"]["indices"]), vec![1, 2]);

    ok(&dir, &["matrix", "class", "--class", "=", "--perm", "grid3.txt", "-o", "m.txt"]);
    let v = ok(&dir, &["matrix", "grid", "--input", "m.txt", "--k", "3", "--cuts", "4,7/4,7"]);
    assert_eq!(v["result"]["is_grid"], true);
    let v = ok(&dir, &["matrix", "grid", "--input", "m.txt", "--k", "3", "--cuts", "2,3/4,7"]);
    assert_eq!(v["result"]["is_grid"], false);
    let v = ok(&dir, &["matrix", "class", "--class", "<=C", "--perm", "perm.txt", "--normalize"]);
    // transposing and complementing turns the column condition strict
    assert_eq!(v["result"]["normalized_class"], ">=R");
    assert_eq!(ok(&dir, &["matrix", "rankdiv", "--input", "m.txt", "--k", "1"])["result"]["status"], "found");
}

#[test]
fn reports_are_deterministic() {
    let (_tmp, dir) = setup();
    write(&dir, "r24.dtw", &pseudo_random(24, 5));
    let args = ["--seed", "11", "tww", "approx", "--input", "r24.dtw", "--k", "2"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms").expect("timing field");
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(ok(&dir, &args));
    let b = strip(ok(&dir, &args));
    assert_eq!(a, b);
    let text = run(&dir, &args).stdout;
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn exit_codes() {
    let (_tmp, dir) = setup();
    assert_eq!(run(&dir, &["tww", "approx"]).code, 1);
    assert_eq!(run(&dir, &["nonsense"]).code, 1);
    assert_eq!(run(&dir, &["--help"]).code, 0);
    assert_eq!(run(&dir, &["tww", "approx", "--input", "missing.dtw"]).code, 2);
    let r = run(&dir, &["--max-n", "8", "tww", "approx", "--input", "t16.dtw"]);
    assert_eq!(r.code, 4);
    assert_eq!(r.json()["error"]["kind"], "size-limit");
    assert_eq!(run(&dir, &["--max-n", "16", "tww", "approx", "--input", "t16.dtw"]).code, 0);
    // `fo check` writes no file
    assert_eq!(run(&dir, &["fo", "check", "--ds", "1", "--input", "c3.dtw", "-o", "x"]).code, 1);
}

#[test]
fn threads_flag_is_accepted() {
    let (_tmp, dir) = setup();
    ok(&dir, &["--threads", "1", "fo", "check", "--ds", "1", "--input", "t16.dtw"]);
}
