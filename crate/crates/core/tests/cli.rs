use std::fs;
use std::path::{Path, PathBuf};

use emsep::cli::{run, Scenario, StoredSolution};
use serde_json::Value;

fn emsep(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("emsep").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios").join(name)
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn max_relative(dir: &Path) -> f64 {
    report(dir)["result"]["summary"]["max"].as_f64().unwrap()
}

#[test]
fn separate_then_verify_stored_solution() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol");
    let s = scenario("magnetic_rotating_spherical.json");
    let (code, out, err) = emsep(&["separate", "--scenario", s.to_str().unwrap(), "--out", sol.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("φ1"));
    for f in ["phi_1.csv", "phi_2.csv", "phi_3.csv", "solution.json", "report.json", "report.csv"] {
        assert!(sol.join(f).exists(), "{f}");
    }
    let header = fs::read_to_string(sol.join("phi_2.csv")).unwrap();
    assert!(header.starts_with("omega,re_phi,im_phi,re_dphi,im_dphi\n"));

    let stored = dir.path().join("stored");
    let fresh = dir.path().join("fresh");
    let solution = sol.join("solution.json");
    let (code, _, err) = emsep(&[
        "verify",
        "--solution",
        solution.to_str().unwrap(),
        "--out",
        stored.to_str().unwrap(),
        "--assert-tol",
        "1e-5",
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = emsep(&["verify", "--scenario", s.to_str().unwrap(), "--out", fresh.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(max_relative(&stored) <= 1e-5);
    // the stored factors reproduce the freshly integrated ones exactly
    assert_eq!(report(&stored)["result"], report(&fresh)["result"]);
    assert_eq!(
        report(&stored)["provenance"]["scenario_sha256"],
        report(&fresh)["provenance"]["scenario_sha256"]
    );
}

#[test]
fn wrong_phi0_lambda_is_reported_and_asserted() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("magnetic_rotating_spherical.json")).unwrap();
    let mut value: Value = serde_json::from_str(&text).unwrap();
    value["diagnostics"] = serde_json::json!({"phi0_lambda": [1.3, -0.6, 0.45]});
    let mutated = dir.path().join("mutated.json");
    fs::write(&mutated, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let sol = dir.path().join("sol");
    let (code, _, _) = emsep(&["separate", "--scenario", mutated.to_str().unwrap(), "--out", sol.to_str().unwrap()]);
    assert_eq!(code, 0);

    let out = dir.path().join("v");
    let solution = sol.join("solution.json");
    let (code, _, _) = emsep(&["verify", "--solution", solution.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "reports are data");
    assert!(max_relative(&out) > 1e-2, "{}", max_relative(&out));

    let (code, _, err) = emsep(&[
        "verify",
        "--solution",
        solution.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--assert-tol",
        "1e-4",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("exceeds"));
}

#[test]
fn audit_geometry_cartesian_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = emsep(&["audit-geometry", "--system", "cartesian", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(max_relative(dir.path()) <= 1e-12);
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("index,check,t,x1,x2,x3,residual,scale,relative,ht,hx\n"));
}

#[test]
fn coulomb_demo_without_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) =
        emsep(&["coulomb-demo", "--samples", "40", "--assert-tol", "1e-5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let checks = report(dir.path())["result"]["checks"].as_array().unwrap().len();
    assert_eq!(checks, 5);
    for name in ["spherical", "prolate_ii_plus", "prolate_ii_minus", "parabolic", "conical"] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn build_potential_table_has_uniform_field() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("magnetic_rotating_cartesian.json");
    let (code, _, err) =
        emsep(&["build-potential", "--scenario", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let rows = report(dir.path())["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 64);
    let b0 = &rows[0]["b"];
    assert!(rows.iter().all(|r| &r["b"] == b0));
    assert!(b0.as_array().unwrap().iter().any(|v| v.as_f64().unwrap() != 0.0));
}

#[test]
fn output_directory_falls_back_to_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-scenario");
    let text = fs::read_to_string(scenario("hj_cartesian.json")).unwrap();
    let mut value: Value = serde_json::from_str(&text).unwrap();
    value["output"] = serde_json::json!({"dir": target});
    let path = dir.path().join("s.json");
    fs::write(&path, value.to_string()).unwrap();
    let (code, _, err) = emsep(&["hj", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(target.join("report.json").exists());
}

#[test]
fn seed_and_samples_flags_override_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("hj_coulomb_spherical.json");
    let (code, _, _) = emsep(&[
        "hj",
        "--scenario",
        s.to_str().unwrap(),
        "--seed",
        "99",
        "--samples",
        "12",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let r = report(dir.path());
    assert_eq!(r["provenance"]["seed"], 99);
    assert_eq!(r["result"]["records"].as_array().unwrap().len(), 12);
    assert_eq!(r["provenance"]["tool"], "emsep");
}

#[test]
fn every_shipped_scenario_loads() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let scenario = Scenario::from_json(&fs::read_to_string(&path).unwrap());
        assert!(scenario.is_ok(), "{}: {:?}", path.display(), scenario.err());
        n += 1;
    }
    assert!(n >= 10);
}

#[test]
fn schema_document_lists_every_scenario_key() {
    let schema: Value = serde_json::from_str(
        &fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/scenario.schema.json")).unwrap(),
    )
    .unwrap();
    let mut documented: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    documented.sort();
    let mut scenario = Scenario::for_system(emsep::coords::SystemId::Spherical);
    scenario.initial = Some([emsep::cli::NODE_FREE_INITIAL; 3]);
    scenario.omega_ranges = Some([[0.5, 1.0], [-1.0, 1.0], [1.0, 2.0]]);
    scenario.output = Some(emsep::cli::OutputConfig { dir: "x".into() });
    let value = serde_json::to_value(&scenario).unwrap();
    let mut keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    keys.sort();
    assert_eq!(documented, keys);
    assert_eq!(schema["additionalProperties"], Value::Bool(false));
}

#[test]
fn stored_solution_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("electrostatic_expanding_prolate.json");
    let (code, _, _) = emsep(&["separate", "--scenario", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("solution.json")).unwrap();
    let stored: StoredSolution = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&stored).unwrap() + "\n";
    assert_eq!(text, again);
    assert_eq!(stored.provenance.seed, 3);
}

#[test]
fn malformed_inputs_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(emsep(&["separate", "--scenario", bad.to_str().unwrap()]).0, 1);
    fs::write(&bad, r#"{"schema": 1, "system": {"id": "spherical"}, "steps": {"hx": -1}}"#).unwrap();
    assert_eq!(emsep(&["verify", "--scenario", bad.to_str().unwrap()]).0, 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(emsep(&["verify", "--solution", missing.to_str().unwrap()]).0, 3);
    assert_eq!(emsep(&["list-systems", "--bogus"]).0, 1);
    assert_eq!(emsep(&["--version"]).0, 0);
}
