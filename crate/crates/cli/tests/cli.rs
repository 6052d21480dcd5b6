use std::process::{Command, Output};

use serde_json::Value;

fn sfunc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfunc"))
        .args(args)
        .env_remove("SFUNC_TRUNCATION")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_geometric_series_is_abelian() {
    let out = sfunc(&["classify", "--num", "0,1", "--den", "1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["result"]["verdict"]["verdict"], "abelian");
    assert_eq!(r["result"]["verdict"]["period"], 1);
    assert_eq!(r["result"]["verdict"]["residues"], serde_json::json!(["1"]));
}

#[test]
fn classify_rejections_exit_one() {
    for (den, reason) in [("1,-2,1", "multiple-pole"), ("1,-2", "pole-not-root-of-unity")] {
        let out = sfunc(&["classify", "--num", "0,1", "--den", den]);
        assert_eq!(out.status.code(), Some(1), "{den}");
        assert_eq!(report(&out)["result"]["verdict"]["reason"], reason);
    }
}

#[test]
fn classify_cyclotomic_coefficients() {
    // ζ_3 z/(1 − ζ_3 z) has residues (1, 0, 0)
    let out = sfunc(&["classify", "--num", "0,3:[0,1]", "--den", "1,3:[0,-1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"]["period"], 3);
    // ζ_3^2 z/(1 − ζ_3 z) has residues (ζ_3, 0, 0)
    let out = sfunc(&["classify", "--num", "0,3:[-1,-1]", "--den", "1,3:[0,-1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["verdict"]["reason"], "irrational-residue");
}

#[test]
fn classify_epsilon_gives_period() {
    let out = sfunc(&["classify", "--num", "0,1", "--den", "1,-1", "--epsilon", "6:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"]["period"], 6);
}

#[test]
fn verify_geometric_two_fails_at_s_two() {
    let out = sfunc(&["verify", "--seq", "geometric:2", "--s", "2", "--pmax", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let at3: Vec<&Value> = r["result"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["p"] == 3 && c["kind"] == "congruence" && c["m"] == 1 && c["r"] == 2)
        .collect();
    assert_eq!(at3.len(), 1);
    assert_eq!(at3[0]["pass"], false);
    assert_eq!(at3[0]["order"], 2);
    assert_eq!(at3[0]["required"], 4);
    let by_prime = r["result"]["first_failure_by_prime"].as_array().unwrap();
    assert!(by_prime.iter().any(|f| f["p"] == 3));
}

#[test]
fn verify_apery_passes_s_three() {
    let out = sfunc(&["verify", "--seq", "apery", "--s", "3", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["summary"]["failed"], 0);
    let plan = r["config"]["plan"].as_array().unwrap();
    let ps: Vec<u64> = plan.iter().map(|w| w["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, vec![5, 7, 11, 13]);
}

#[test]
fn verify_all_methods_agree() {
    let out = sfunc(&[
        "verify", "--seq", "geometric:3", "--s", "1", "--pmax", "7", "--mmax", "3", "--rmax", "2",
        "--method", "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["agree"], true);
    for m in ["direct", "cartier", "b", "q"] {
        assert_eq!(r["result"][m]["summary"]["failed"], 0, "{m}");
    }
}

#[test]
fn verify_hadamard_product() {
    let out = sfunc(&[
        "verify", "--seq", "apery", "--hadamard", "periodic:2:1,0", "--s", "3", "--primes", "5,7",
        "--mmax", "3", "--rmax", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", "--seq", "domb", "--s", "3", "--pmax", "11", "--mmax", "3", "--rmax", "2"];
    let a = sfunc(&args);
    let b = sfunc(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let out = sfunc(&["verify", "--seq", "nope", "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seq"));
    let out = sfunc(&["classify", "--num", "0,x", "--den", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--num"));
    let out = sfunc(&["verify", "--seq", "apery", "--s", "3", "--primes", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--primes"));
    let out = sfunc(&["verify", "--seq", "apery", "--s", "3", "--mmax", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sfunc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = sfunc(&[
        "--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "-q",
        "verify", "--seq", "all-ones", "--s", "2", "--pmax", "5", "--mmax", "2", "--rmax", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["command"], "verify");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("method,kind,p,s,m,r,n,order,required,pass\n"));
    assert!(text.lines().count() > 1);
}

#[test]
fn expand_honours_truncation_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_sfunc"))
        .args(["expand", "--num", "0,1", "--den", "1,-1"])
        .env("SFUNC_TRUNCATION", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["truncation"], 5);
    assert_eq!(r["result"]["coeffs"], serde_json::json!(["0", "1", "1", "1", "1", "1"]));
    let out = sfunc(&["expand", "--num", "0,1", "--den", "1,-1", "--truncation", "6", "--apply", "cartier:2", "--apply", "delta"]);
    assert_eq!(report(&out)["result"]["coeffs"], serde_json::json!(["0", "1", "2", "3"]));
}

#[test]
fn convert_representations() {
    let out = sfunc(&["convert", "--values", "1,1,1,1,1,1", "--to", "q"]);
    assert_eq!(report(&out)["result"]["values"], serde_json::json!(["1", "0", "0", "0", "0", "0"]));
    let out = sfunc(&["convert", "--seq", "all-ones", "--to", "b", "--s", "2", "--n", "4"]);
    assert_eq!(report(&out)["result"]["values"], serde_json::json!(["1", "0", "0", "0"]));
    let out = sfunc(&["convert", "--from", "q", "--to", "a", "--values", "1,0,0"]);
    assert_eq!(report(&out)["result"]["values"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn dwork_command() {
    let out = sfunc(&["dwork", "--num", "0,1", "--den", "1,-1", "--truncation", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["integral"], true);
    let out = sfunc(&["dwork", "--num", "0,1", "--den", "1,-2,1", "--truncation", "30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["witness"], serde_json::json!([2, 2]));
}

#[test]
fn lab_commands() {
    let out = sfunc(&["lab", "rho", "--x", "2", "--p", "5", "--K", "10"]);
    let r = report(&out);
    assert_eq!(r["result"]["value"], "6");
    assert_eq!(r["result"]["order"], 0);
    let out = sfunc(&["lab", "kappa", "--x", "7", "--p", "3"]);
    assert_eq!(report(&out)["result"]["kappa"], 0);
    let out = sfunc(&["lab", "probe", "--x", "2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["first_violation"], 1);
    let lift = report(&sfunc(&["lab", "teichmuller", "--x", "2", "--p", "5", "--K", "12"]))["result"]["lift"]
        .as_str()
        .unwrap()
        .to_string();
    let out = sfunc(&["lab", "probe", "--x", &lift, "--p", "5", "--K", "12", "--nmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sfunc(&["lab", "stability", "--x", "2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["config"]["k"], serde_json::Value::Null);
    let out = sfunc(&["lab", "scaling", "--x", "2", "--p", "3", "--mmax", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sfunc(&["lab", "vandermonde", "--xs", "2,3", "--bs", "1,1", "--p", "7", "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sfunc(&["lab", "rho", "--x", "10", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_commands() {
    let out = sfunc(&["catalog", "list"]);
    let names: Vec<String> = report(&out)["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"apery".to_string()));
    let out = sfunc(&["catalog", "show", "apery", "--n", "3"]);
    assert_eq!(report(&out)["result"]["values"], serde_json::json!(["5", "73", "1445"]));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("az.csv");
    let out = sfunc(&["catalog", "export", "az", "--n", "12", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = sfunc(&["catalog", "ingest", file.to_str().unwrap()]);
    assert_eq!(report(&out)["result"]["horizon"], 12);
    let out = sfunc(&["verify", "--from-csv", file.to_str().unwrap(), "--s", "1", "--primes", "5", "--mmax", "2", "--rmax", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,3\n2,9\n4,3\n").unwrap();
    let out = sfunc(&["catalog", "ingest", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
