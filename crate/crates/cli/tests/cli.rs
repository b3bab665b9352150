use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mopsym_cli::{parse_document, schema_check, Artifact};
use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mopsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mopsym")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = mopsym(args);
    assert_eq!(out.status.code(), Some(0), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn strs(v: &[&str]) -> Value {
    json!(v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes `text` to a temporary file and returns its handle.
fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

fn assert_round_trip(text: &str) {
    let doc = parse_document(text).unwrap_or_else(|e| panic!("reparse failed: {e}"));
    assert_eq!(doc.emit(), text, "emit → parse → emit changed the bytes");
}

fn committed(name: &str) -> String {
    std::fs::read_to_string(fixture(&format!("expected/{name}"))).unwrap()
}

#[test]
fn gen_symmetric_ones_contains_x3_minus_1() {
    let text = run_ok(&["gen", "--input", path_str(&fixture("symmetric_d2_ones.json")), "--M", "6"]);
    assert_eq!(text, committed("gen_symmetric_d2_m6.json"));
    let v = json_of(&text);
    assert_eq!(v["polys"][3], strs(&["-1", "0", "0", "1"]));
    assert_eq!(v["polys"][6], strs(&["1", "0", "0", "-4", "0", "0", "1"]));
    assert_round_trip(&text);
}

#[test]
fn symmetrize_laguerre_gives_paired_gammas() {
    let text = run_ok(&["symmetrize", "--input", path_str(&fixture("laguerre_d1.json")), "--M", "3"]);
    assert_eq!(text, committed("symmetrize_laguerre_m3.json"));
    let v = json_of(&text);
    assert_eq!(v["gamma"], strs(&["1", "1", "2", "2", "3", "3", "4"]));
    assert_eq!(v["s"][2], strs(&["-1", "0", "1"]));
    assert_eq!(v["s"][3], strs(&["0", "-2", "0", "1"]));
    assert_round_trip(&text);
}

#[test]
fn laguerre_lu_pivots_and_multipliers() {
    let text = run_ok(&["lu", "--input", path_str(&fixture("laguerre_d1.json")), "--N", "4"]);
    assert_eq!(text, committed("lu_laguerre_n4.json"));
    let v = json_of(&text);
    assert_eq!(v["pivots"], strs(&["1", "2", "3", "4"]));
    let subdiag: Vec<&str> = (1..4).map(|i| v["l"]["bands"][i][0].as_str().unwrap()).collect();
    assert_eq!(subdiag, ["1", "2", "3"]);
    assert_round_trip(&text);
}

#[test]
fn desymmetrize_ones_recovers_a1() {
    let text = run_ok(&["desymmetrize", "--input", path_str(&fixture("symmetric_d2_ones_long.json")), "--M", "2"]);
    assert_eq!(text, committed("desymmetrize_d2_ones_m2.json"));
    let v = json_of(&text);
    assert_eq!(v["families"][0], json!([["1"], ["-1", "1"], ["1", "-4", "1"]]));
    assert_round_trip(&text);
}

#[test]
fn matrix_mop_w1_is_diagonal() {
    let text = run_ok(&["matrix-mop", "--input", path_str(&fixture("symmetric_d2_ones_long.json")), "--N", "1"]);
    assert_eq!(text, committed("matrix_mop_d2_ones_n1.json"));
    let v = json_of(&text);
    assert_eq!(v["w"][1], json!([[["-1", "1"], [], []], [[], ["-2", "1"], []], [[], [], ["-3", "1"]]]));
    assert_round_trip(&text);
}

#[test]
fn committed_fixtures_round_trip_byte_for_byte() {
    for entry in std::fs::read_dir(fixture("expected")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert_round_trip(&text);
    }
}

/// One invocation per output-producing command.
fn every_command() -> Vec<Vec<String>> {
    let f = |n: &str| path_str(&fixture(n)).to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        s(&["gen", "--input", &f("laguerre_d1.json"), "--M", "5"]),
        s(&["gen", "--input", &f("symmetric_d2_ones.json"), "--M", "6"]),
        s(&["symmetrize", "--input", &f("recurrence_d2.json"), "--M", "6", "--free-params", &f("free_params_d2.json")]),
        s(&["desymmetrize", "--input", &f("symmetric_d2_ones_long.json"), "--M", "4"]),
        s(&["lu", "--input", &f("recurrence_d2.json")]),
        s(&["darboux", "--input", &f("recurrence_d2.json"), "--M", "8"]),
        s(&["moments", "--input", &f("recurrence_d2.json"), "--K", "8", "--v00", &f("v00_d2.json")]),
        s(&["weyl", "--input", &f("recurrence_d2.json"), "--K", "10", "--z", "30,1"]),
        s(&["weyl", "--input", &f("symmetric_d2_ones_long.json"), "--K", "12", "--v00", &f("v00_d2.json"), "--z", "-5,0.5"]),
        s(&["matrix-mop", "--input", &f("recurrence_d2.json"), "--N", "3"]),
        s(&["favard", "--input", &f("symmetric_d2_ones_long.json"), "--K", "2"]),
        s(&["verify", "--input", &f("recurrence_d2.json")]),
    ]
}

#[test]
fn every_output_round_trips_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let mut kinds = Vec::new();
    for (i, args) in every_command().iter().enumerate() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = run_ok(&args);
        assert_eq!(run_ok(&args), text, "{args:?} is not deterministic");
        assert_round_trip(&text);
        let doc = parse_document(&text).unwrap();
        kinds.push(doc.artifact.kind());
        let path = dir.path().join(format!("out{i}.json"));
        std::fs::write(&path, &text).unwrap();
        let report = run_ok(&["verify", "--input", path_str(&path)]);
        assert_round_trip(&report);
        assert_eq!(json_of(&report)["passed"], json!(true), "{args:?}: {report}");
    }
    // hankel consumes a moments document
    let moments = dir.path().join("out6.json");
    let hankel = run_ok(&["hankel", "--input", path_str(&moments), "--N", "2"]);
    assert_round_trip(&hankel);
    let h = temp_json(&hankel);
    assert_eq!(json_of(&run_ok(&["verify", "--input", path_str(h.path())]))["passed"], json!(true));
    for kind in ["polynomials", "symmetrization", "darboux", "lu", "moments", "series", "matrix_mop", "favard", "verify_report"] {
        assert!(kinds.contains(&kind), "no command produced {kind}");
    }
}

#[test]
fn tampered_symmetric_table_fails_with_witness() {
    let text = run_ok(&["gen", "--input", path_str(&fixture("symmetric_d2_ones.json")), "--M", "6"]);
    let mut v = json_of(&text);
    v["polys"][4][0] = json!("1");
    let f = temp_json(&v.to_string());
    let out = mopsym(&["verify", "--input", path_str(f.path())]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let err = json_of(&stderr);
    assert_eq!(err["kind"], "error");
    assert_eq!(err["error"], "NotDSymmetric");
    assert_eq!(err["index"], json!({"d": 2, "n": 4, "exponent": 0}));
    assert_round_trip(&stderr);
}

#[test]
fn tampered_family_is_reported_not_degenerate() {
    let text = run_ok(&["darboux", "--input", path_str(&fixture("recurrence_d2.json")), "--M", "6"]);
    let mut v = json_of(&text);
    v["families"][1][3][0] = json!("12345");
    let f = temp_json(&v.to_string());
    let out = mopsym(&["verify", "--input", path_str(f.path())]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(report["passed"], json!(false));
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == json!(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"family recurrences") && failed.contains(&"reproducible"), "{failed:?}");
}

#[test]
fn zero_pivot_exits_with_degeneracy_object() {
    let rec = json!({"schema": "mopsym/1", "kind": "recurrence", "d": 1, "beta": ["0", "1", "2"], "gamma": [["0", "1", "1"]]});
    let f = temp_json(&rec.to_string());
    let out = mopsym(&["lu", "--input", path_str(f.path())]);
    assert_eq!(out.status.code(), Some(2));
    let err = json_of(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(err["error"], "ZeroPivot");
    assert_eq!(err["operation"], "lu/lu_hessenberg");
    assert_eq!(err["index"], json!({"k": 0}));
}

#[test]
fn schema_check_reports() {
    let good = json_of(&std::fs::read_to_string(fixture("recurrence_d2.json")).unwrap());
    assert!(schema_check(&good).is_empty());

    let bad = json!({"schema": "mopsym/1", "kind": "symmetric_recurrence", "d": 2, "gamma": ["1", "1/0"], "colour": "red"});
    let report = schema_check(&bad);
    let codes: Vec<(&str, &str)> = report.iter().map(|d| (d.code.as_str(), d.path.as_str())).collect();
    assert!(codes.contains(&("malformed_rational", "$.gamma[1]")), "{codes:?}");
    assert!(codes.contains(&("unknown_field", "$.colour")), "{codes:?}");

    let wrong_d = json!({"schema": "mopsym/1", "kind": "recurrence", "d": 2, "beta": ["1"], "gamma": [["0"]]});
    assert!(schema_check(&wrong_d).iter().any(|d| d.code == "length" && d.path == "$.gamma"));

    let versions = json!({"schema": "mopsym/0", "kind": "matrix", "rows": [["1"]]});
    assert!(schema_check(&versions).iter().any(|d| d.code == "schema_version"));
    let kind = json!({"schema": "mopsym/1", "kind": "teapot"});
    assert!(schema_check(&kind).iter().any(|d| d.code == "unknown_kind"));
    let nested = json!({"schema": "mopsym/1", "kind": "polynomials", "d": 1, "m": 0, "symmetric": false, "polys": [["1"]],
        "source": {"kind": "recurrence", "d": 1, "beta": ["x"], "gamma": [[]], "extra": 1}});
    let paths: Vec<String> = schema_check(&nested).into_iter().map(|d| d.path).collect();
    assert!(paths.contains(&"$.source.beta[0]".to_string()) && paths.contains(&"$.source.extra".to_string()), "{paths:?}");
}

#[test]
fn malformed_input_exits_1_with_diagnostics() {
    let bad = json!({"schema": "mopsym/1", "kind": "symmetric_recurrence", "d": 2, "gamma": ["1", "1/0"]});
    let f = temp_json(&bad.to_string());
    let out = mopsym(&["gen", "--input", path_str(f.path()), "--M", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = json_of(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(err["error"], "SchemaError");
    assert_eq!(err["diagnostics"][0]["code"], "malformed_rational");
}

#[test]
fn short_gamma_list_gives_length_diagnostic() {
    let out = mopsym(&["gen", "--input", path_str(&fixture("symmetric_d2_ones.json")), "--M", "20"]);
    assert_eq!(out.status.code(), Some(1));
    let err = json_of(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(err["diagnostics"][0]["code"], "length");
    assert_eq!(err["diagnostics"][0]["path"], "$.gamma");

    let out = mopsym(&["desymmetrize", "--input", path_str(&fixture("symmetric_d2_ones.json")), "--M", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&String::from_utf8(out.stderr).unwrap())["diagnostics"][0]["code"], "length");
}

#[test]
fn options_are_validated_per_command() {
    let input = fixture("symmetric_d2_ones.json");
    for args in [
        vec!["gen", "--input", path_str(&input)],
        vec!["gen", "--input", path_str(&input), "--M", "3", "--K", "2"],
        vec!["gen", "--input", path_str(&input), "--M", "3", "--d", "3"],
        vec!["gen", "--M", "3"],
        vec!["desymmetrize", "--input", path_str(&fixture("laguerre_d1.json")), "--M", "2"],
        vec!["gen", "--bogus"],
    ] {
        let out = mopsym(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    let out = mopsym(&["weyl", "--input", path_str(&fixture("recurrence_d2.json")), "--K", "4", "--z", "0.5,0"]);
    assert_eq!(out.status.code(), Some(2), "a point inside the norm disc is a domain error");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let stdout =
        run_ok(&["gen", "--input", path_str(&fixture("symmetric_d2_ones.json")), "--M", "6", "--output", path_str(&path)]);
    assert!(stdout.is_empty());
    let doc = parse_document(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(matches!(doc.artifact, Artifact::Polynomials(_)));
}

#[test]
fn suite_criteria_run_through_verify() {
    for id in ["6", "9"] {
        let text = run_ok(&["verify", "--criterion", id]);
        let v = json_of(&text);
        assert_eq!(v["target"], "suite");
        assert_eq!(v["passed"], json!(true), "{text}");
        assert_round_trip(&text);
    }
}
