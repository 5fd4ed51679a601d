mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cherrypick")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn pair(name: &str) -> String {
    fixture_dir("pairs").join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--leaves", "5", "--seed", "7", "--pair"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(run(&["gen", "--leaves", "5", "--seed", "8", "--pair"]).stdout, a.stdout);
}

#[test]
fn identical_inputs_give_zero() {
    let q = pair("quartet_a.nwk");
    assert_eq!(stdout(&run(&["tbr", "--tree1", &q, "--tree2", &q])).trim(), "0");
    assert_eq!(stdout(&run(&["hybrid", "--forest1", &q, "--forest2", &q])).trim(), "0");
}

#[test]
fn quartet_pair_gives_one() {
    let (a, b) = (pair("quartet_a.nwk"), pair("quartet_b.nwk"));
    let o = run(&["hybrid", "--forest1", &a, "--forest2", &b]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["--json", "tbr", "--tree1", &a, "--tree2", &b]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "tbr");
    assert!(v["timing_ms"].is_number());
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn hybrid_matches_tbr_on_generated_trees() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..12u64 {
        let n = (4 + seed % 3).to_string();
        let text = stdout(&run(&["gen", "--leaves", &n, "--seed", &seed.to_string(), "--pair"]));
        let p = write(dir.path(), "pair.nwk", &text);
        let (head, tail) = text.split_once("# forest 2\n").unwrap();
        let t1 = write(dir.path(), "t1.nwk", head);
        let t2 = write(dir.path(), "t2.nwk", tail);
        let h = run(&["hybrid", "--pair", &p]);
        let t = run(&["tbr", "--tree1", &t1, "--tree2", &t2]);
        assert!(h.status.success() && t.status.success());
        assert_eq!(stdout(&h), stdout(&t), "seed {seed}");
    }
}

#[test]
fn emitted_network_displays_both_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["gen", "--leaves", "6", "--seed", "3", "--components", "2", "--pair"]));
    let (head, tail) = text.split_once("# forest 2\n").unwrap();
    let f1 = write(dir.path(), "f1.nwk", head);
    let f2 = write(dir.path(), "f2.nwk", tail);
    let net = dir.path().join("n.net").to_str().unwrap().to_string();
    let trace = dir.path().join("t.json").to_str().unwrap().to_string();
    let o = run(&["hybrid", "--forest1", &f1, "--forest2", &f2, "--network-out", &net, "--trace-out", &trace]);
    assert!(o.status.success(), "{}", stderr(&o));
    let w: usize = stdout(&o).trim().parse().unwrap();
    let n = cherrypick::io::parse_network(&std::fs::read_to_string(&net).unwrap()).unwrap();
    assert!(n.reticulation_number() <= w);
    for f in [&f1, &f2] {
        let witness = dir.path().join("w.json");
        let o = run(&["displays", "--network", &net, "--forest", f, "--witness-out", witness.to_str().unwrap()]);
        assert_eq!(stdout(&o).trim(), "yes");
        let _: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(witness).unwrap()).unwrap();
    }
    let o = run(&["validate-trace", "--forest1", &f1, "--forest2", &f2, "--trace", &trace]);
    assert_eq!(stdout(&o).trim(), w.to_string());
    let rebuilt = dir.path().join("r.net").to_str().unwrap().to_string();
    let o = run(&["build-network", "--forest1", &f1, "--forest2", &f2, "--trace", &trace, "--out", &rebuilt]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&net).unwrap(), std::fs::read(&rebuilt).unwrap());
}

#[test]
fn corrupted_trace_names_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (pair("quartet_a.nwk"), pair("quartet_b.nwk"));
    let trace = dir.path().join("t.json").to_str().unwrap().to_string();
    assert!(run(&["hybrid", "--forest1", &a, "--forest2", &b, "--trace-out", &trace]).status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut steps: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    steps.swap(0, 1);
    let bad = write(dir.path(), "bad.json", &serde_json::to_string(&steps).unwrap());
    let o = run(&["validate-trace", "--forest1", &a, "--forest2", &b, "--trace", &bad]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("step 0"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    let bad = fixture_dir("malformed").join("unbalanced.nwk");
    let bad = bad.to_str().unwrap();
    let q = pair("quartet_a.nwk");
    let o = run(&["hybrid", "--forest1", bad, "--forest2", &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unbalanced.nwk:1:13:"), "{}", stderr(&o));
    let split = pair("split_six.nwk");
    assert_eq!(run(&["hybrid", "--forest1", &split, "--forest2", &q]).status.code(), Some(3));
    assert_eq!(run(&["tbr", "--tree1", &split, "--tree2", &split]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let f1 = write(dir.path(), "a.nwk", "((1,2),(3,(4,(5,(6,7)))));\n");
    let f2 = write(dir.path(), "b.nwk", "((1,7),(5,(3,(2,(6,4)))));\n");
    let o = run(&["hybrid", "--forest1", &f1, "--forest2", &f2, "--budget", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("bounds "));
    let o = run(&["tbr", "--tree1", &f1, "--tree2", &f2, "--cap", "0"]);
    assert_eq!(o.status.code(), Some(4));
}
