use std::path::Path;
use std::process::Command;

use bundlechoice_core::result::EstimationResult;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bundlechoice"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn simulate_estimate_bootstrap_and_test() {
    let dir = tempfile::tempdir().unwrap();
    let data = p(dir.path(), "d.csv");
    assert_eq!(run(&["simulate", "--design", "1", "--n", "200", "--seed", "4", "--out", &data]).0, 0);

    let cfg = p(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"mrc": {"stage1_kernel_order": 4}}"#).unwrap();
    let res = p(dir.path(), "r.json");
    assert_eq!(run(&["estimate", "--method", "mrc", "--data", &data, "--config", &cfg, "--out", &res]), (0, String::new()));
    let r: EstimationResult = serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert_eq!(r.names, vec!["beta_2", "gamma_2"]);
    assert!(r.bootstrap.is_none());

    let boot = p(dir.path(), "b.json");
    assert_eq!(run(&["bootstrap", "--method", "mrc", "--data", &data, "--b", "5", "--seed", "2", "--out", &boot]).0, 0);
    let b: EstimationResult = serde_json::from_str(&std::fs::read_to_string(&boot).unwrap()).unwrap();
    let bs = b.bootstrap.unwrap();
    assert_eq!(bs.requested, 5);
    assert_eq!(bs.intervals.len(), 2);

    let eta = p(dir.path(), "e.json");
    assert_eq!(run(&["test-eta", "--method", "mrc", "--data", &data, "--b", "19", "--out", &eta]).0, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&eta).unwrap()).unwrap();
    assert_eq!(v["test"]["draws"].as_array().unwrap().len(), 19);
    assert!(v["test"]["positive_effect"].is_boolean());
}

#[test]
fn montecarlo_output_is_bitwise_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = p(dir.path(), &format!("t{k}.csv"));
        let est = p(dir.path(), &format!("e{k}.csv"));
        let args = ["--threads", "1", "montecarlo", "--design", "1", "--method", "mrc", "--n", "100,200", "--reps", "3", "--seed", "9", "--out", &out, "--estimates", &est];
        assert_eq!(run(&args).0, 0);
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&est).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let table = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(table.starts_with("N,beta_2.MBIAS,beta_2.RMSE,beta_2.MED,beta_2.MAD,gamma_2.MBIAS"));
    assert_eq!(table.lines().count(), 3);
    assert_eq!(String::from_utf8(outputs[0].1.clone()).unwrap().lines().count(), 7);

    let text = p(dir.path(), "t.txt");
    assert_eq!(run(&["montecarlo", "--design", "1", "--method", "mrc", "--n", "100", "--reps", "2", "--out", &text]).0, 0);
    assert!(std::fs::read_to_string(&text).unwrap().lines().nth(1).unwrap().contains("MBIAS"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cross = p(dir.path(), "c.csv");
    let panel = p(dir.path(), "p.csv");
    let out = p(dir.path(), "o.json");
    assert_eq!(run(&["simulate", "--design", "1", "--n", "30", "--out", &cross]).0, 0);
    // Two agents who choose the same outcome in both periods.
    std::fs::write(
        &panel,
        "id,t,d1,d2,x1_1,x2_1,w_1\n1,1,0,0,0.1,0.2,0.3\n1,2,0,0,0.4,0.5,0.6\n2,1,1,1,0.7,0.8,0.9\n2,2,1,1,1.1,1.2,1.3\n",
    )
    .unwrap();

    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["estimate", "--method", "probit", "--data", &cross, "--out", &out]).0, 2);
    assert_eq!(run(&["estimate", "--method", "mrc", "--data", &p(dir.path(), "missing.csv"), "--out", &out]).0, 2);
    assert_eq!(run(&["estimate", "--method", "panel-ms", "--data", &cross, "--out", &out]).0, 2);
    assert_eq!(run(&["simulate", "--design", "9", "--n", "30", "--out", &cross]).0, 2);
    let bad_cfg = p(dir.path(), "bad.json");
    std::fs::write(&bad_cfg, r#"{"mrcc": {}}"#).unwrap();
    assert_eq!(run(&["estimate", "--method", "mrc", "--data", &cross, "--config", &bad_cfg, "--out", &out]).0, 2);

    let (code, err) = run(&["estimate", "--method", "panel-ms", "--data", &panel, "--out", &out]);
    assert_eq!(code, 3, "{err}");

    let table = p(dir.path(), "t.csv");
    let (code, err) = run(&["montecarlo", "--design", "3", "--method", "panel-ms", "--n", "2", "--reps", "10", "--out", &table]);
    assert_eq!(code, 4, "{err}");
    assert!(err.contains("replications failed"));
}
