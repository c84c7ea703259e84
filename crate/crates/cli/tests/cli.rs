use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn prunekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prunekit"))
        .args(args)
        .env_remove("PRUNEKIT_GUARD")
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn body(out: &Output) -> String {
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.split_once('\n').map(|(_, b)| b.to_string()).unwrap_or_default()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn gnm(dir: &Path) -> String {
    let path = dir.join("g.json");
    let p = path.to_str().unwrap();
    let out = prunekit(&["gen", "--family", "gnm", "--n", "14", "--m", "35", "--seed", "2", "--out", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p.to_string()
}

#[test]
fn check_triangle_cut() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.txt", "0 1\n1 2\n0 2\n");
    let out = prunekit(&["check", "--objective", "cut", "--graph", &g]);
    assert!(out.status.success());
    let recs = lines(&out);
    assert_eq!(recs[0]["command"], "check");
    let sub = recs.iter().find(|r| r["property"] == "submodular").unwrap();
    let mono = recs.iter().find(|r| r["property"] == "monotone").unwrap();
    assert_eq!(sub["passed"], true);
    assert_eq!(mono["passed"], false);
}

#[test]
fn eval_full_set_has_alpha_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnm(dir.path());
    let out = prunekit(&["eval", "--instance", &g, "--k", "3", "--full"]);
    assert!(out.status.success());
    let recs = lines(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[1]["alpha"], 1.0);
    for a in recs[1]["report"]["alpha_by_budget"].as_array().unwrap() {
        assert_eq!(a.as_f64(), Some(1.0));
    }
}

#[test]
fn header_echoes_config_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnm(dir.path());
    let out = prunekit(&["prune", "--instance", &g, "--k", "2", "--algo", "window_rand", "--seeds", "4,5"]);
    assert!(out.status.success());
    let recs = lines(&out);
    let h = &recs[0];
    assert_eq!(h["schema_version"], 1);
    assert_eq!(h["config"]["params"]["algo"], "window_rand");
    assert_eq!(h["config"]["params"]["omega"], 2);
    assert_eq!(h["defaults"]["interference_universe"], 35);
    assert!(h["timings"]["wall_secs"].is_number());
    assert_eq!(recs.len(), 3);
    assert!(recs[1].get("elapsed_secs").is_none());
}

#[test]
fn bodies_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnm(dir.path());
    let args = [
        "sweep", "--instance", &g, "--k", "2", "--algo", "seq_disjoint,window_rand,random",
        "--omega", "2,3", "--seeds", "0..3", "--jobs", "2",
    ];
    let a = prunekit(&args);
    let b = prunekit(&args);
    assert!(a.status.success());
    assert!(!body(&a).is_empty());
    assert_eq!(body(&a), body(&b));

    let sep = ["separation", "--trials", "30", "--seed", "7"];
    assert_eq!(body(&prunekit(&sep)), body(&prunekit(&sep)));
}

#[test]
fn gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = prunekit(&["gen", "--family", "interference", "--n", "12", "--seed", "9"]);
    let b = prunekit(&["gen", "--family", "interference", "--n", "12", "--seed", "9"]);
    let c = prunekit(&["gen", "--family", "interference", "--n", "12", "--seed", "10"]);
    let obj = |o: &Output| lines(o)[0]["objective"].clone();
    assert_eq!(obj(&a), obj(&b));
    assert_ne!(obj(&a), obj(&c));

    let edges = dir.path().join("e.txt");
    let out = prunekit(&[
        "gen", "--family", "planted", "--n", "30", "--communities", "3", "--format", "edges",
        "--out", edges.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = prunekit(&["check", "--objective", "cut", "--graph", edges.to_str().unwrap(), "--trials", "200"]);
    assert!(check.status.success());
    assert_eq!(lines(&check)[1]["mode"], "sampled");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnm(dir.path());

    // configuration
    assert_eq!(prunekit(&["prune", "--bogus"]).status.code(), Some(2));
    assert_eq!(prunekit(&["eval", "--objective", "cut", "--k", "2"]).status.code(), Some(2));
    assert_eq!(
        prunekit(&["prune", "--instance", &g, "--k", "2", "--algo", "nope"]).status.code(),
        Some(2)
    );

    // guard, by flag and by environment
    assert_eq!(
        prunekit(&["eval", "--instance", &g, "--k", "3", "--full", "--guard", "10"]).status.code(),
        Some(3)
    );
    let env = Command::new(env!("CARGO_BIN_EXE_prunekit"))
        .args(["eval", "--instance", &g, "--k", "3", "--full"])
        .env("PRUNEKIT_GUARD", "10")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&env.stderr).trim()).unwrap();
    assert_eq!(err["error"], "guard");

    // parse
    let bad = write(dir.path(), "b.txt", "0 1\n1 x\n");
    let out = prunekit(&["check", "--objective", "cut", "--graph", &bad]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b.txt:2:"));
    let missing = dir.path().join("none.json");
    assert_eq!(
        prunekit(&["eval", "--instance", missing.to_str().unwrap(), "--k", "2"]).status.code(),
        Some(4)
    );
}

#[test]
fn file_objectives_load() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write(dir.path(), "c.txt", "0: 0 1 2\n1: 2 3\n2: 4\n3: 0 4 5\n");
    let out = prunekit(&["eval", "--objective", "coverage", "--cover", &cover, "--k", "2", "--algo", "seq_disjoint"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[1]["alpha"], 1.0);

    let sim = write(dir.path(), "s.csv", "0.9,0.1,0.2\n0.1,0.8,0.3\n0.2,0.2,0.7\n");
    let rel = write(dir.path(), "r.csv", "1.0\n0.1\n0.6\n");
    let out = prunekit(&[
        "check", "--objective", "restricted_fl", "--sim", &sim, "--rel", &rel, "--tau", "0.5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(lines(&out)[1..].iter().all(|r| r["passed"] == true));

    let pen = write(dir.path(), "p.csv", "size,theta\n0,0\n1,0.05\n2,0.1\n3,0.15\n");
    let out = prunekit(&["check", "--objective", "proxy", "--sim", &sim, "--penalty", &pen]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn knapsack_eval_reports_every_budget() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnm(dir.path());
    let costs: String = (0..14).map(|i| format!("{i},{}\n", 0.2 + 0.05 * i as f64)).collect();
    let c = write(dir.path(), "costs.csv", &costs);
    let out = prunekit(&["eval", "--instance", &g, "--costs", &c, "--budget", "1.5", "--ell", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = lines(&out);
    let budgets: Vec<&Value> = recs.iter().filter(|r| r["record"] == "budget").collect();
    assert_eq!(budgets.len(), 8);
    for b in budgets {
        let r = b["ratio"].as_f64().unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&r));
    }
    assert_eq!(
        prunekit(&["eval", "--instance", &g, "--costs", &c]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_from_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "gen.json", r#"{"family": "planted", "n": 16, "communities": 4, "seed": 3}"#);
    let agg = dir.path().join("agg.json");
    let csv = dir.path().join("cells.csv");
    let out = prunekit(&[
        "sweep", "--instance", &spec, "--k", "2", "--algo", "seq_disjoint,random", "--seeds", "0..2",
        "--aggregate", agg.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<Value> = lines(&out).into_iter().filter(|r| r["record"] == "row").collect();
    assert_eq!(rows.len(), 4);
    // a generator spec yields a fresh instance per seed
    assert_eq!(rows[0]["instance_seed"], 3);
    assert_eq!(rows[1]["instance_seed"], 4);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&agg).unwrap()).unwrap();
    assert_eq!(doc["cells"].as_array().unwrap().len(), 2);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("algorithm,omega,"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn planted_community_size() {
    let a = prunekit(&["gen", "--family", "planted", "--n", "40", "--community-size", "10"]);
    assert!(a.status.success());
    assert_eq!(lines(&a)[0]["generator"]["communities"], 4);
    let both = prunekit(&["gen", "--family", "planted", "--n", "40", "--community-size", "10", "--communities", "3"]);
    assert_eq!(both.status.code(), Some(2));
}
