use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spectra_sect::graded::{hat, pauli_symbol, Grading, SymbolSample};
use spectra_sect::io::{self, GradingJson, OperatorJson, SymbolJson};
use spectra_sect::linalg::real_diagonal;
use spectra_sect::opcore::{bounded_scalar, TailDescriptor, TruncatedOperator};
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectra-sect"));
    cmd.env_remove("SPECTRA_SECT_JOBS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_family(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("family.json");
    let out = run(&["family", "gen", "random", "--seed", "11", "--dim", "6", "--samples", "7", "--out", s(&p)]);
    assert_eq!(code(&out), 0);
    p
}

#[test]
fn fuglede_demo_marker_step() {
    let out = run(&["demo", "fuglede", "--dim", "32"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    let r = &v["report"];
    let step = r["marker_riesz"].as_f64().unwrap();
    assert!((step - 2.0 * bounded_scalar(31.0)).abs() < 1e-12);
    assert!((step - 1.998960228679399).abs() < 1e-12);
    assert!(r["marker_riesz_jump"].as_bool().unwrap());
    assert!((r["marker_graph"].as_f64().unwrap() - 124.0 / 962.0).abs() < 1e-12);
    assert_eq!(r["closed_form_error"].as_f64().unwrap(), 0.0);
}

#[test]
fn rellich_demo_table() {
    let out = run(&["demo", "rellich", "--x", "0.5", "--mesh", "2000"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let row = &v["report"]["rows"][0];
    assert!((row["reference"].as_f64().unwrap() + 3.66725582449567).abs() < 1e-9);
    assert!(row["relative_error"].as_f64().unwrap() < 0.01);
    assert!((row["order"].as_f64().unwrap() - 2.0).abs() < 0.1);

    let csv = run(&["demo", "rellich", "--x", "0.2,0.9", "--mesh", "500", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,mesh,eigenvalue,reference,relative_error,order");
    assert_eq!(lines.len(), 3);
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let fam = random_family(&dir);
    let cert = dir.path().join("cert.json");
    let out = run(&["construct-section", "--family", s(&fam), "--out", s(&cert)]);
    assert_eq!(code(&out), 0);
    let out = run(&["verify-section", "--family", s(&fam), "--certificate", s(&cert)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(json(&out)["report"]["all_hold"].as_bool().unwrap());

    // the bare certificate is accepted too
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let bare = file(&dir, "bare.json", &doc["report"].to_string());
    let out = run(&["verify-section", "--family", s(&fam), "--certificate", s(&bare)]);
    assert_eq!(code(&out), 0);

    let out = run(&["trivialize", "--family", s(&fam), "--certificate", s(&cert), "--profile", "linear"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["report"]["all_hold"].as_bool().unwrap());
}

#[test]
fn tampered_certificate_fails_with_reason() {
    let dir = TempDir::new().unwrap();
    let fam = random_family(&dir);
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&run(&["construct-section", "--family", s(&fam), "--out", s(&cert)])), 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let projections = doc["report"]["projections"].as_array_mut().unwrap();
    let tail = projections[0]["tail_type"].clone();
    let n = projections[0]["dim"].as_u64().unwrap() as usize;
    projections[0]["re"] = serde_json::to_value(vec![vec![0.0; n]; n]).unwrap();
    projections[0]["im"] = serde_json::to_value(vec![vec![0.0; n]; n]).unwrap();
    projections[0]["tail_type"] = tail;
    let bad = file(&dir, "bad.json", &doc.to_string());
    let out = run(&["verify-section", "--family", s(&fam), "--certificate", s(&bad)]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["reason"], "section_violated");
    assert_eq!(v["report"]["first_failure"], 0);
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.json", "{\"label\": \"x\",\n \"grid\": [1,\n");
    let out = run(&["family", "report", "--family", s(&bad)]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert_eq!(v["reason"], "parse_error");
    assert!(v["message"].as_str().unwrap().contains("line 3"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["no-such-verb"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["reason"], "usage_error");
    let out = run(&["demo", "shift", "--gap", "-1"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["reason"], "invalid_input");
    let out = run(&["verify-section", "--family", "/nonexistent.json", "--certificate", "/nonexistent.json"]);
    assert_eq!(code(&out), 2);
    let out = run(&["demo", "no-gss", "--jobs", "0"]);
    assert_eq!(code(&out), 2);
    let dir = TempDir::new().unwrap();
    let fam = random_family(&dir);
    let out = run(&["construct-section", "--family", s(&fam), "--format", "csv"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["reason"], "unsupported_format");
    let out = run(&["construct-section", "--family", s(&fam), "--delta", "0.6"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["reason"], "invalid_delta");
}

#[test]
fn mathematical_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let fam = dir.path().join("nogss.json");
    assert_eq!(code(&run(&["family", "gen", "no-gss", "--dim", "4", "--out", s(&fam)])), 0);
    let gss = dir.path().join("gss.json");
    // constant 1 on a family whose tails point both ways
    let one = spectra_sect::io::ProjectionJson::from_projection(
        &spectra_sect::opcore::ProjectionMatrix::from_real_diagonal(
            &[1.0; 4],
            spectra_sect::opcore::TailType::Identity,
        )
        .unwrap(),
    );
    std::fs::write(&gss, io::to_json(&vec![one; 5])).unwrap();
    let out = run(&["construct-section", "--family", s(&fam), "--gss", s(&gss)]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["reason"], "gss_rejected");
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&["family", "gen", "random", "--seed", "5", "--out", s(&a)]);
    run(&["family", "gen", "random", "--seed", "5", "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    run(&["family", "gen", "random", "--seed", "6", "--out", s(&c)]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());

    let one = bin()
        .args(["family", "report", "--family", s(&a)])
        .env("SPECTRA_SECT_JOBS", "1")
        .output()
        .unwrap();
    let four = run(&["--jobs", "4", "family", "report", "--family", s(&a)]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let cert1 = run(&["--jobs", "1", "construct-section", "--family", s(&a)]);
    let cert4 = run(&["--jobs", "3", "construct-section", "--family", s(&a)]);
    assert_eq!(cert1.stdout, cert4.stdout);
}

#[test]
fn config_file_and_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = file(
        &dir,
        "cfg.json",
        r#"{"seed": 3, "thresholds": {"jump": 0.4}, "tolerances": {"gap": 1e-7}}"#,
    );
    let out = run(&["--config", s(&cfg), "--seed", "5", "demo", "no-gss", "--dim", "4"]);
    assert_eq!(code(&out), 0);
    let c = &json(&out)["config"];
    assert_eq!(c["seed"], 5);
    assert_eq!(c["thresholds"]["jump"], 0.4);
    assert_eq!(c["tolerances"]["gap"], 1e-7);

    let bad = file(&dir, "bad.json", r#"{"seeed": 3}"#);
    let out = run(&["--config", s(&bad), "demo", "no-gss"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["reason"], "parse_error");
}

#[test]
fn family_generators_feed_reports() {
    let dir = TempDir::new().unwrap();
    for (name, extra) in [
        ("fuglede", vec!["--dim", "8"]),
        ("shift", vec!["--samples", "5"]),
        ("no-gss", vec!["--dim", "5"]),
        ("path", vec!["--dim", "4", "--steps", "6"]),
        ("rellich", vec!["--points", "0.2,0.5", "--mesh", "100"]),
        ("random", vec!["--dim", "4", "--samples", "5"]),
    ] {
        let p = dir.path().join(format!("{name}.json"));
        let mut args = vec!["family", "gen", name];
        args.extend(extra);
        args.extend(["--out", s(&p)]);
        assert_eq!(code(&run(&args)), 0, "{name}");
        let out = run(&["family", "report", "--family", s(&p), "--format", "csv"]);
        assert_eq!(code(&out), 0, "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("x,c_x,riesz_step,graph_step,flags\n"), "{name}");
    }
    let out = run(&["family", "report", "--family", s(&dir.path().join("no-gss.json"))]);
    let v = json(&out);
    assert!(v["report"]["obstruction"]["obstructed"].as_bool().unwrap());
}

#[test]
fn remaining_demos_pass() {
    for demo in ["shift", "no-gss"] {
        let out = run(&["demo", demo]);
        assert_eq!(code(&out), 0, "{demo}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = run(&["demo", "fuglede", "--dim", "8", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().nth(7).unwrap();
    assert!(last.starts_with("7,"));
    assert!(last.contains("riesz_jump"));
}

#[test]
fn deform_reports_invertible_endpoint() {
    let dir = TempDir::new().unwrap();
    let fam = random_family(&dir);
    let out = run(&["deform", "--family", s(&fam), "--steps", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["report"]["max_radius"].as_f64().unwrap() < 1.0);
    assert_eq!(v["report"]["times"].as_array().unwrap().len(), 5);
}

fn graded_inputs(dir: &TempDir) -> (PathBuf, PathBuf) {
    let a = hat(&real_diagonal(&[1.0, 2.0])).unwrap();
    let op = file(dir, "odd.json", &io::to_json(&OperatorJson::from_operator(a.base())));
    let g = file(dir, "grading.json", &io::to_json(&GradingJson::from_grading(a.grading())));
    (op, g)
}

#[test]
fn cl1_verify_default_section() {
    let dir = TempDir::new().unwrap();
    let (op, g) = graded_inputs(&dir);
    let out = run(&["cl1-verify", "--operator", s(&op), "--grading", s(&g), "--cutoff", "0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert!(v["report"]["check"]["anticommutation_defect"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["report"]["kernel"]["signature"], 0);

    let even = file(
        &dir,
        "even.json",
        &io::to_json(&OperatorJson::from_operator(
            &TruncatedOperator::from_real_diagonal(&[1.0, 2.0, 3.0, 4.0], TailDescriptor::alternating()).unwrap(),
        )),
    );
    let out = run(&["cl1-verify", "--operator", s(&even), "--grading", s(&g), "--cutoff", "0.5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["reason"], "not_odd");
}

#[test]
fn factor_symbol_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let good = SymbolSample {
        points: vec![pauli_symbol("p0"), pauli_symbol("p1")],
    };
    let p = file(&dir, "symbol.json", &io::to_json(&SymbolJson::from_sample(&good)));
    let out = run(&["factor-symbol", "--symbol", s(&p)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["report"]["points"][0]["w_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["report"]["factors"][0]["re"][0][0], 1.0);

    let mut bad = good.clone();
    bad.points[1].coefficients[0] = &bad.points[1].coefficients[0] + real_diagonal(&[1e-3, 1e-3]);
    let p = file(&dir, "bad.json", &io::to_json(&SymbolJson::from_sample(&bad)));
    let out = run(&["factor-symbol", "--symbol", s(&p)]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["reason"], "w_condition_violated");
    assert!(v["message"].as_str().unwrap().contains("p1"));
}

#[test]
fn sigma_trick_on_even_operator() {
    let dir = TempDir::new().unwrap();
    let a = TruncatedOperator::from_real_diagonal(&[0.5, 2.0, -1.0, -3.0], TailDescriptor::alternating()).unwrap();
    let op = file(&dir, "a.json", &io::to_json(&OperatorJson::from_operator(&a)));
    let g = file(
        &dir,
        "g.json",
        &io::to_json(&GradingJson::from_grading(&Grading::standard(2, 2))),
    );
    let out = run(&["sigma-trick", "--operator", s(&op), "--grading", s(&g)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert!((v["report"]["even_norm"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["report"]["min_square_eigenvalue"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["report"]["gss"]["holds"].as_bool().unwrap());
}
