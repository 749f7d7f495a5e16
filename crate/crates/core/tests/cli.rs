use std::process::{Command, Output};

use eulermagic::verify::VerifyJson;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulermagic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["verify", &fixture("thm12_8x8.txt")]).status.code(), Some(0));
    assert_eq!(bin(&["verify", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(bin(&["perm", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["search5"]).status.code(), Some(2));
    assert_eq!(bin(&["help"]).status.code(), Some(0));

    let dir = std::env::temp_dir().join(format!("eulermagic-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("diag.txt");
    std::fs::write(&path, "1 0\n0 2\n").unwrap();
    assert_eq!(bin(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_json_round_trips() {
    let out = bin(&["verify", "--json", &fixture("five5_2.txt")]);
    let text = stdout(&out);
    let parsed: VerifyJson = serde_json::from_str(text.trim()).unwrap();
    assert!(parsed.euler_magic && !parsed.proper);
    assert_eq!(parsed.distinct_squares, 24);
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text.trim());
}

#[test]
fn family_json_schema() {
    let out = bin(&["family", "0", "0", "0", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["X"], "31");
    for key in ["params", "right", "matrix", "report"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["matrix"].as_array().unwrap().len(), 8);
}

#[test]
fn prove3_json_schema() {
    let out = bin(&["prove3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    for line in v.as_array().unwrap() {
        assert!(line["name"].is_string());
        assert!(["PASS", "AXIOM"].contains(&line["status"].as_str().unwrap()));
        assert_eq!(line["lhs_minus_rhs_term_count"], 0);
    }
}

#[test]
fn search_output_is_seed_stable() {
    let args = ["search5", "--seed", "3", "--iterations", "500", "--workers", "3"];
    let a = stdout(&bin(&args));
    assert_eq!(a, stdout(&bin(&args)));
    for line in a.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}
