use serde_json::Value;
use specgeo::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("specgeo").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}\n{err}"));
    (code, v)
}

fn records(doc: &Value) -> Vec<&Value> {
    doc["suites"].as_array().unwrap().iter().flat_map(|s| s["records"].as_array().unwrap()).collect()
}

#[test]
fn usage_errors_exit_two() {
    let (code, out, err) = call(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["tube-check", "--poly", "x1x2"]).0, 2);
    assert_eq!(call(&["tube-check", "--poly", "x1x2", "--suite", "nope"]).0, 2);
    assert_eq!(call(&["jalg", "verify"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("tube-check") && out.contains("cone-check") && out.contains("pv"));
}

#[test]
fn input_errors_exit_two() {
    let (code, out, err) = call(&["tube-check", "--poly", "/no/such/file.json", "--suite", "product"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["pv", "check", "--entry", "no-such-entry"]).0, 2);
    assert_eq!(call(&["jalg", "build", "--family", "rank3"]).0, 2);
}

#[test]
fn polynomial_files_are_read_from_disk() {
    let dir = std::env::temp_dir().join(format!("specgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cusp.json");
    std::fs::write(&path, r#"{"n":2,"d":3,"seed":[1,1],"monomials":[{"exp":[2,1],"coeff":"1"}]}"#).unwrap();
    let (code, doc) = json(&["tube-check", "--poly", path.to_str().unwrap(), "--suite", "pullback", "--points", "5"]);
    assert_eq!(code, 0, "{doc}");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(call(&["tube-check", "--poly", path.to_str().unwrap(), "--suite", "product"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gc_gs_report_on_cubic3() {
    let (code, doc) =
        json(&["cone-check", "--poly", "cubic3.json", "--suite", "gc-gs", "--points", "10", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["command"], "cone-check");
    let recs = records(&doc);
    assert!(!recs.is_empty());
    let worst = recs.iter().map(|r| r["deviation"].as_f64().unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn every_record_carries_its_tolerance() {
    let (code, doc) = json(&["tube-check", "--poly", "x1x2x3", "--suite", "isometries", "--points", "10"]);
    assert_eq!(code, 0);
    for r in records(&doc) {
        assert!(r["tolerance"].is_number(), "{r}");
        assert!(r["basis"].is_string(), "{r}");
        let status = r["status"].as_str().unwrap();
        assert!(["pass", "fail", "skip"].contains(&status));
    }
    let skipped: Vec<_> = records(&doc).into_iter().filter(|r| r["status"] == "skip").collect();
    assert!(skipped.iter().any(|r| r["id"] == "inversion-full-tube"));
}

#[test]
fn jalg_builds() {
    let (code, doc) = json(&["jalg", "build", "--family", "rank2", "--p", "1", "--s", "2", "--sign", "-1"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["data"]["degree"], 3);
    let (code, doc) = json(&["jalg", "build", "--family", "rank3", "--psi", "psi_complex"]);
    assert_eq!(code, 0, "{doc}");
    // a non-special map is a negative control: its invariance check fails
    let (code, doc) = json(&["jalg", "build", "--family", "rank3", "--psi", "psi_line_into_plane"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "fail");
    let (code, _) = json(&["jalg", "build", "--family", "rank3", "--psi", "psi_zero_2_2", "--gram-signs", "1,-1,1"]);
    assert_eq!(code, 0);
}

#[test]
fn pv_commands() {
    let (code, doc) = json(&["pv", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = doc["data"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["det3-mat", "det3-sym", "pfaffian-6", "spinor-7"] {
        assert!(names.contains(&n), "{names:?}");
    }
    let (code, doc) = json(&["pv", "enumerate-keys", "--dmax", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["data"].as_array().unwrap().len(), 3);
    let (code, doc) = json(&["pv", "check", "--entry", "pfaffian-6", "--samples", "5"]);
    assert_eq!(code, 0, "{doc}");
    let (code, doc) = json(&["pv", "check", "--entry", "spinor-7"]);
    assert_eq!(code, 0);
    assert!(records(&doc).iter().all(|r| r["status"] == "skip"));
}

#[test]
fn text_format() {
    let (code, out, err) = call(&["--format", "text", "cone-check", "--poly", "x1x2x3", "--suite", "lemma4h"]);
    assert_eq!(code, 0);
    assert!(out.contains("ok  ") && out.contains("lemma-4h"), "{out}");
    assert!(serde_json::from_str::<Value>(&out).is_err());
    assert!(err.starts_with("pass:"), "{err}");
}

#[test]
fn full_run_is_deterministic() {
    let (code, a, err) = call(&["all", "--seed", "7"]);
    assert_eq!(code, 0, "{err}");
    let (_, b, _) = call(&["all", "--seed", "7"]);
    assert_eq!(a, b);
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["seed"], 7);
    assert!(!a.contains("wall"));
    let (_, c, _) = call(&["all", "--seed", "8"]);
    assert_ne!(a, c);
}
