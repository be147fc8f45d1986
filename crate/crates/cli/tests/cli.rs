use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sftconj")).args(args.iter().map(|a| a.as_ref())).output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

const COLLAPSE_SOURCE: &str = r#"{"vertices": ["a", "b", "c", "d", "e"],
  "edges": [["a","b"],["b","a"],["a","c"],["c","d"],["d","e"],["e","a"],["c","b"],["e","e"]]}"#;
const COLLAPSE_TARGET: &str = r#"{"vertices": ["a", "b"], "edges": [["a","b"],["b","a"],["b","b"]]}"#;
const COLLAPSE_MAP: &str = "k=1 m=0\na -> a\nb -> b\nc -> b\nd -> b\ne -> b\n";

const UNREACHED_SOURCE: &str = r#"{"vertices": ["a","b","c","d","e","f","g"],
  "edges": [["a","f"],["f","c"],["c","b"],["b","a"],["f","e"],["e","d"],["d","a"],["g","g"],["d","g"]]}"#;
const UNREACHED_TARGET: &str = r#"{"vertices": ["a","bd","c","e","f","g"],
  "edges": [["a","f"],["f","c"],["f","e"],["c","bd"],["e","bd"],["bd","a"],["g","g"],["bd","g"]]}"#;
const UNREACHED_MAP: &str = "k=1 m=0\na -> a\nb -> bd\nc -> c\nd -> bd\ne -> e\nf -> f\ng -> g\n";

const TWO_CYCLE: &str = r#"{"vertices": ["a", "b"], "edges": [["a","b"],["b","a"]]}"#;
const LOOP: &str = r#"{"vertices": ["x"], "edges": [["x","x"]]}"#;

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn verify_exit_codes() {
    let ws = Workspace::new();
    let (g, h, m) = (ws.file("g.json", COLLAPSE_SOURCE), ws.file("h.json", COLLAPSE_TARGET), ws.file("phi.map", COLLAPSE_MAP));
    let out = run(&[&"verify", &"--source", &g, &"--target", &h, &"--map", &m]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_out(&out)["is_conjugacy"], true);

    let (g, h, m) =
        (ws.file("g3.json", UNREACHED_SOURCE), ws.file("h3.json", UNREACHED_TARGET), ws.file("phi3.map", UNREACHED_MAP));
    let out = run(&[&"verify", &"--source", &g, &"--target", &h, &"--map", &m]);
    assert_eq!(code(&out), 1);
    let v = json_out(&out);
    assert_eq!(v["is_conjugacy"], false);
    assert_eq!(v["failure"], "not_surjective");

    let out = run(&[&"verify", &"--source", &g, &"--target", &h, &"--map", &ws.path("missing.map")]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    let bad = ws.file("bad.json", r#"{"vertices": ["a"], "edges": [["a","z"]]}"#);
    let out = run(&[&"verify", &"--source", &bad, &"--target", &h, &"--map", &m]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_codes_still_print_a_verdict() {
    let ws = Workspace::new();
    let g = ws.file("g.json", COLLAPSE_SOURCE);
    let h = ws.file("h.json", TWO_CYCLE);
    let m = ws.file("phi.map", COLLAPSE_MAP);
    let out = run(&[&"verify", &"--source", &g, &"--target", &h, &"--map", &m]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_out(&out)["failure"], "invalid_code");
}

#[test]
fn verify_edge_shifts() {
    let ws = Workspace::new();
    let g = ws.file("g.json", r#"{"vertices": ["p"], "multi_edges": [["e","p","p"],["f","p","p"]]}"#);
    let m = ws.file("phi.map", "k=1 m=0\ne -> e\nf -> f\n");
    let out = run(&[&"verify", &"--edge-shift", &"--source", &g, &"--target", &g, &"--map", &m]);
    assert_eq!(code(&out), 0);
}

#[test]
fn decide_and_reduce() {
    let ws = Workspace::new();
    let (g, h) = (ws.file("g.json", COLLAPSE_SOURCE), ws.file("h.json", COLLAPSE_TARGET));
    let out = run(&[&"decide", &"--source", &g, &"--target", &h, &"--k", &"1"]);
    assert_eq!(code(&out), 0);
    let found = json_out(&out);
    let m = ws.file("found.map", found["map"].as_str().unwrap());
    assert_eq!(code(&run(&[&"verify", &"--source", &g, &"--target", &h, &"--map", &m])), 0);

    let two = ws.file("two.json", TWO_CYCLE);
    let out = run(&[&"decide", &"--source", &two, &"--target", &h, &"--k", &"1"]);
    assert_eq!(code(&out), 1);

    let out = run(&[&"reduce", &"--source", &g, &"--ell", &"3"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    let mut partition: Vec<Vec<String>> = serde_json::from_value(v["partition"].clone()).unwrap();
    partition.sort();
    assert_eq!(partition, [vec!["a"], vec!["b", "c", "d", "e"]]);

    let out = run(&[&"reduce", &"--source", &two, &"--ell", &"1"]);
    assert_eq!(code(&out), 1);

    let out = run(&[&"reduce", &"--source", &g, &"--ell", &"2", &"--budget", &"1"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json_out(&out)["budget_exceeded"], true);
}

#[test]
fn hitting_set_gadget() {
    let ws = Workspace::new();
    let inst = ws.file("inst.json", r#"{"sets": [["u1","u2"],["u2","u3"]], "universe": ["u1","u2","u3"], "t": 1}"#);
    let out = run(&[&"gadget", &"hitting-set", &"--instance", &inst, &"--no-widgets"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 13);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 31);
    assert_eq!(v["metadata"]["reduction"]["K"], 30);

    let dir = ws.path("out");
    let out = run(&[&"gadget", &"hitting-set", &"--instance", &inst, &"--K", &"4", &"--out-dir", &dir]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("5mn"));
    let graph: Value = serde_json::from_str(&fs::read_to_string(dir.join("graph.json")).unwrap()).unwrap();
    assert_eq!(graph["vertices"].as_array().unwrap().len(), 13 + 14 * 4);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["reduction"]["test_scale"], true);
    assert_eq!(meta["reduction"]["widgets"].as_array().unwrap().len(), 7);

    let out = run(&[&"gadget", &"hitting-set", &"--instance", &inst, &"--K", &"3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn widget_gadget() {
    let out = run(&[&"gadget", &"widget", &"--K", &"4"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 3 + 8);
    let edges: Vec<(String, String)> = serde_json::from_value(v["graph"]["edges"].clone()).unwrap();
    let has = |a: &str, b: &str| edges.iter().any(|(x, y)| x == a && y == b);
    assert!(has("a", "w1__b1") && has("w1__b1", "w1__c1"));
    assert!(has("w1__a1", "w1__b2") && has("w1__b2", "c") && has("w1__b2", "w1__c1"));
    assert!(has("a", "w1__b3") && has("w1__a1", "w1__b3") && has("w1__b3", "w1__c2"));
    assert!(has("w1__a2", "w1__b4") && has("w1__b4", "w1__c2"));
    assert_eq!(v["metadata"]["widget"]["K"], 4);

    assert_eq!(code(&run(&[&"gadget", &"widget", &"--K", &"5"])), 2);
}

#[test]
fn pair_gadgets() {
    let ws = Workspace::new();
    let l = ws.file("loop.json", LOOP);
    let out = run(&[&"gadget", &"vertex-pair", &"--source", &l, &"--target", &l, &"--k", &"2"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_eq!(v["source"]["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(v["target"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(code(&run(&[&"gadget", &"vertex-pair", &"--source", &l, &"--target", &l, &"--k", &"1"])), 2);

    let m = ws.file("m.json", r#"{"vertices": ["p"], "multi_edges": [["e","p","p"]]}"#);
    let out = run(&[&"gadget", &"edge-pair", &"--source", &m, &"--target", &m, &"--k", &"2"]);
    assert_eq!(code(&out), 0);
    assert!(json_out(&out)["source"]["multi_edges"].is_array());

    let tri = ws.file("tri.json", r#"{"vertices": ["a","b","c"], "edges": [["a","b"],["b","c"],["c","a"]]}"#);
    let out = run(&[&"gadget", &"gi-double", &"--first", &tri, &"--second", &tri]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_out(&out)["first"]["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn tools() {
    let ws = Workspace::new();
    let g = ws.file("g.json", COLLAPSE_SOURCE);
    let h = ws.file("h.json", COLLAPSE_TARGET);
    let traces = |p: &Path| json_out(&run(&[&"tools", &"traces", &"--graph", &p, &"--n", &"8"]))["traces"].clone();
    assert_eq!(traces(&g), traces(&h));
    assert_eq!(traces(&h).as_array().unwrap()[..5], ["1", "3", "4", "7", "11"].map(Value::from)[..]);

    let g3 = ws.file("g3.json", UNREACHED_SOURCE);
    let e = json_out(&run(&[&"tools", &"entropy", &"--graph", &g3]))["entropy"].as_f64().unwrap();
    assert!((e - 0.25).abs() < 1e-6);

    let out = json_out(&run(&[&"tools", &"higher-block", &"--graph", &h, &"--k", &"1"]));
    assert_eq!(out, serde_json::from_str::<Value>(COLLAPSE_TARGET).unwrap());

    let dangling = ws.file("d.json", r#"{"vertices": ["a","b"], "edges": [["a","a"],["a","b"]]}"#);
    let out = json_out(&run(&[&"tools", &"trim", &"--graph", &dangling]));
    assert_eq!(out["vertices"], serde_json::json!(["a"]));

    let m = ws.file("m.json", r#"{"vertices": ["p"], "multi_edges": [["e","p","p"],["f","p","p"]]}"#);
    let out = json_out(&run(&[&"tools", &"edge-to-vertex", &"--graph", &m]));
    assert_eq!(out["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn threads_flag_does_not_change_answers() {
    let ws = Workspace::new();
    let (g, h, m) = (ws.file("g.json", COLLAPSE_SOURCE), ws.file("h.json", COLLAPSE_TARGET), ws.file("phi.map", COLLAPSE_MAP));
    let one = run(&[&"--threads", &"1", &"verify", &"--source", &g, &"--target", &h, &"--map", &m]);
    let four = run(&[&"verify", &"--threads", &"4", &"--source", &g, &"--target", &h, &"--map", &m]);
    assert_eq!(one.stdout, four.stdout);
}
