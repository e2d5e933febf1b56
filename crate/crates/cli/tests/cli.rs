use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn netlocal() -> Command {
    Command::cargo_bin("netlocal").unwrap()
}

fn run(args: &[&str], code: i32) -> Value {
    let out = netlocal().args(args).assert().code(code).get_output().stdout.clone();
    serde_json::from_slice(&out).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn triangle_bounds() {
    let v = run(&["bound", &path("triangle.json")], 0);
    assert_eq!(v["affineDimension"], 7);
    assert_eq!(v["basic"], 9);
    let refined: Vec<u64> = v["sources"].as_array().unwrap().iter().map(|s| s["value"].as_u64().unwrap()).collect();
    assert_eq!(refined, vec![6, 6, 6]);
}

#[test]
fn bound_reads_the_network_of_a_behavior_file() {
    let v = run(&["bound", &path("p-neq.json")], 0);
    assert_eq!(v["affineDimension"], 7);
}

#[test]
fn relaxation_sizes() {
    let v = run(&["relax-size", "6", "5", "4"], 0);
    let sides: Vec<u64> = v.as_array().unwrap().iter().map(|s| s["moment_matrix_side"].as_u64().unwrap()).collect();
    assert_eq!(sides, vec![7626, 3828, 1653]);
    netlocal().args(["relax-size", "0"]).assert().code(2);
}

#[test]
fn eval_exact_model_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("behavior.json");
    netlocal().args(["eval", &path("model-222.json"), "--out", out.to_str().unwrap()]).assert().code(0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let values: Vec<&str> = v["values"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(values, ["0", "1/6", "1/6", "1/6", "1/6", "1/6", "1/6", "0"]);
    // the emitted behavior is accepted back as input
    let bound = run(&["bound", out.to_str().unwrap()], 0);
    assert_eq!(bound["affineDimension"], 7);
}

#[test]
fn eval_float_model() {
    let v = run(&["eval", &path("model-326.json")], 0);
    assert_eq!(v["flavor"], "float");
    for (k, x) in v["values"].as_array().unwrap().iter().enumerate() {
        let target = if k == 0 || k == 7 { 0.0 } else { 1.0 / 6.0 };
        assert!((x.as_f64().unwrap() - target).abs() < 1e-10);
    }
    let exact_as_float = run(&["eval", &path("model-222.json"), "--flavor", "float"], 0);
    assert_eq!(exact_as_float["flavor"], "float");
    netlocal().args(["eval", &path("model-326.json"), "--flavor", "exact"]).assert().code(2);
}

#[test]
fn eval_grid_cap_is_a_resource_error() {
    netlocal().args(["eval", &path("model-222.json"), "--cap", "4"]).assert().code(3);
}

#[test]
fn compressed_model_has_the_same_behavior() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.json");
    netlocal().args(["compress", &path("model-222.json"), "--out", out.to_str().unwrap()]).assert().code(0);
    let before = run(&["eval", &path("model-222.json")], 0);
    let after = run(&["eval", out.to_str().unwrap()], 0);
    assert_eq!(before["values"], after["values"]);
}

#[test]
fn pr_box_is_nonlocal() {
    let v = run(&["bell-test", &path("pr-box.json")], 1);
    assert_eq!(v["result"], "nonlocal");
    assert_eq!(v["certificate"]["tightStrategies"].as_array().unwrap().len(), 8);
    assert!(v["certificate"]["value"].as_str().unwrap().starts_with('-'));
}

#[test]
fn product_behavior_is_local() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("uniform.json");
    let network: Value = serde_json::from_str(&std::fs::read_to_string(data("chsh.json")).unwrap()).unwrap();
    let doc = serde_json::json!({"network": network, "flavor": "exact", "values": vec!["1/4"; 16]});
    std::fs::write(&file, doc.to_string()).unwrap();
    let v = run(&["bell-test", file.to_str().unwrap()], 0);
    assert_eq!(v["result"], "local");
}

#[test]
fn bell_tools_reject_multi_source_networks() {
    netlocal().args(["bell-test", &path("p-neq.json")]).assert().code(2);
    netlocal().args(["bell-facets", &path("triangle.json")]).assert().code(2);
}

#[test]
fn chsh_facets() {
    let v = run(&["bell-facets", &path("chsh.json")], 0);
    assert_eq!(v["count"], 24);
}

#[test]
fn possibilistic_decisions() {
    let v = run(&["possibilistic", "--support", "000,111", "--cards", "2,2,2"], 1);
    assert_eq!(v["feasible"], false);
    let v = run(&["possibilistic", "--support", "001,010,011,100,101,110"], 0);
    assert_eq!(v["feasible"], true);
    run(&["possibilistic", "--support", "000,111", "--cards", "3,3,3", "--pruned"], 1);
    netlocal().args(["possibilistic", "--support", "000,111", "--cards", "3,3,3"]).assert().code(3);
    netlocal().args(["possibilistic", "--support", "0a1"]).assert().code(2);
}

#[test]
fn triangle_search_is_thread_independent() {
    let target = path("p-neq.json");
    let one = netlocal()
        .args(["triangle-search", "--target", &target, "--threads", "1"])
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    let four = netlocal()
        .args(["triangle-search", "--target", &target, "--threads", "4"])
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    assert_eq!(one, four);
    let v: Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["total"], 531441);
    assert!(v["model"].is_object());
}

#[test]
fn triangle_search_finds_nothing_for_equal_outputs() {
    let v = run(&["triangle-search", "--target", &path("p-eq.json"), "--starts", "20"], 1);
    assert_eq!(v["matching"], 0);
    assert!(v.get("model").is_none());
}

#[test]
fn sos_verify_reports_two_thirds() {
    let out = netlocal().arg("sos-verify").assert().code(0).get_output().clone();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], "2/3");
    assert!(v["identities"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    assert!(String::from_utf8(out.stderr).unwrap().contains("eta <= 2/3"));
}

#[test]
fn quantum_table_passes() {
    let v = run(&["quantum-table", "--eta", "0.75"], 0);
    assert_eq!(v["entries"].as_array().unwrap().len(), 36);
    netlocal().args(["quantum-table", "--eta", "1.5"]).assert().code(2);
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\n  \"parties\": [\n").unwrap();
    let out = netlocal().args(["bound", file.to_str().unwrap()]).assert().code(2).get_output().stderr.clone();
    assert!(String::from_utf8(out).unwrap().contains("line"));
}

#[test]
fn usage_errors_exit_two() {
    netlocal().arg("no-such-command").assert().code(2);
    netlocal().args(["possibilistic"]).assert().code(2);
    netlocal().args(["relax-size", "--threads", "0"]).assert().code(2);
}
