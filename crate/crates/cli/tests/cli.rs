use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unit-twist-lab"))
        .args(args)
        .env_remove("UNIT_TWIST_LAB_MAX_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn no_arguments_prints_usage_and_exits_1() {
    let o = lab(&[]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout).to_string() + &String::from_utf8_lossy(&o.stderr);
    assert!(text.contains("Usage"), "{text}");
}

#[test]
fn help_exits_0() {
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
    assert_eq!(lab(&["approx", "search", "--help"]).status.code(), Some(0));
}

#[test]
fn cubic_family_units() {
    let o = lab(&["units", "family", "cubic", "--D", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["polynomial"], "X^3 - 7");
    assert_eq!(v["unit_rank"], 1);
    assert_eq!(v["units"][0]["coords"], serde_json::json!(["4", "2", "1"]));
    assert_eq!(v["units"][0]["norm"], "1");
    // house(eps0) = 4 + 2*7^(1/3) + 7^(2/3) = 11.4851680755677...
    let lo: f64 = v["units"][0]["house"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((lo - 11.485168075567749).abs() < 1e-12);
}

#[test]
fn biquadratic_family_has_rank_two() {
    let v = json(&lab(&["units", "family", "biquadratic", "-D", "3"]));
    assert_eq!(v["polynomial"], "X^4 - 80");
    assert_eq!(v["units"].as_array().unwrap().len(), 2);
}

#[test]
fn search_is_deterministic_without_timestamp() {
    let args = [
        "approx", "search", "--family", "cubic", "-D", "2", "--n", "0..4", "--qmax", "100000", "--no-timestamp",
    ];
    let a = lab(&args);
    let b = lab(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# unit-twist-lab approx schema_version=1"));
    assert_eq!(
        lines.next().unwrap(),
        "n,p,q,lhs_lo,lhs_hi,rhs_lo,rhs_hi,quality_lo,quality_hi,verdict"
    );
    // n = 1: 22/1 is the best approximation to eps0 * 7^(1/3).
    assert!(text.lines().any(|l| l.starts_with("1,22,1,")), "{text}");
    assert!(!text.contains("UNDECIDED"));
}

#[test]
fn timestamp_line_is_added_by_default() {
    let o = lab(&["approx", "liouville", "--family", "cubic", "--n", "1", "--qmax", "100"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# generated_at="));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let p = path.to_str().unwrap();
    let o = lab(&[
        "approx", "search", "--family", "cubic", "--n", "0..3", "--qmax", "10000", "--format", "json", "--out", p,
    ]);
    assert!(o.status.success());
    let check = lab(&["report", "check", "--input", p]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));
    assert!(stdout(&check).contains("approx"));

    let csv_direct = lab(&[
        "approx", "search", "--family", "cubic", "--n", "0..3", "--qmax", "10000", "--no-timestamp",
    ]);
    let csv_rendered = lab(&["report", "render", "--input", p]);
    assert_eq!(csv_direct.stdout, csv_rendered.stdout);
}

#[test]
fn effective_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.json");
    let p = path.to_str().unwrap();
    let o = lab(&["effective", "gap", "--family", "cubic", "--p", "22", "--q", "1", "--out", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let check = lab(&["report", "check", "--input", p]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("effective"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "[field]\nfamily = \"cubic\"\nD = 3\n[approx]\nn = \"0..2\"\nqmax = 1000\n").unwrap();
    let o = lab(&["--config", cfg.to_str().unwrap(), "approx", "search", "--no-timestamp"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<String> = stdout(&o).lines().skip(2).map(String::from).collect();
    assert_eq!(rows.len(), 3);
    // eps0 * 26^(1/3) for D = 3 is near 79.
    assert!(rows[1].starts_with("1,79,1,"), "{rows:?}");
}

#[test]
fn config_field_path_is_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.json"), r#"{"coeffs": [1, 0, -2], "alpha": ["0", "1"], "units": [["1", "1"]]}"#)
        .unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "[field]\npath = \"f.json\"\n").unwrap();
    let o = lab(&["--config", cfg.to_str().unwrap(), "field", "info"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["signature"], serde_json::json!([2, 0]));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[approx]\nbogus = 1\n").unwrap();
    let o = lab(&["--config", cfg.to_str().unwrap(), "field", "info", "--poly", "1,0,-2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bogus") && err.contains("line 2"), "{err}");
}

#[test]
fn bad_input_exits_1() {
    assert_eq!(lab(&["field", "info", "--poly", "1,0,-4"]).status.code(), Some(1));
    assert_eq!(lab(&["field", "info"]).status.code(), Some(1));
    assert_eq!(lab(&["approx", "search", "--family", "cubic", "--n", "3..1"]).status.code(), Some(1));
}

#[test]
fn precision_ceiling_exits_2() {
    let o = lab(&[
        "--max-bits", "64", "approx", "search", "--family", "cubic", "--n", "60", "--qmax", "1000000",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn precision_ceiling_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_unit-twist-lab"))
        .args(["approx", "search", "--family", "cubic", "--n", "60", "--qmax", "1000000"])
        .env("UNIT_TWIST_LAB_MAX_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thue_enum_matches_known_solutions() {
    let v = json(&lab(&["thue", "enum", "--poly", "1,0,0,-2", "--k", "1", "--box", "100"]));
    let sols: Vec<(i64, i64)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["x"].as_i64().unwrap(), s["y"].as_i64().unwrap()))
        .collect();
    assert_eq!(sols, vec![(-1, -1), (1, 0)]);
}

#[test]
fn unit_recovery_and_lemma() {
    // eps0^-3 for D = 2.
    let v = json(&lab(&["units", "recover", "--family", "cubic", "--coords", "1,-12,6", "--strict"]));
    assert_eq!(v["exponents"], serde_json::json!([-3]));
    assert_eq!(v["norm_lemma"], "HOLDS");
}

#[test]
fn pisot_check_of_the_cubic_unit() {
    let v = json(&lab(&["approx", "pisot-check", "--family", "cubic", "--coords", "4,2,1"]));
    assert_eq!(v["verdict"], "HOLDS");
    assert_eq!(v["trace"], "12");
}
