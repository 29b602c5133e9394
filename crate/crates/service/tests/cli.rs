mod common;

use std::path::Path;

use common::{corpus_dir, crux, fixture, p, small_config, stdout};
use crux_core::format::{parse_document, serialize_document};
use crux_core::{ClimberProfile, ModelConfig, Planner};
use serde_json::Value;

#[test]
fn parse_echoes_canonical_form() {
    let path = fixture("ladder.crux");
    let o = crux(&["parse", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_document(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stdout(&o), serialize_document(&doc.wall, &doc.routes));

    let dir = tempfile::tempdir().unwrap();
    let canonical = dir.path().join("c.crux");
    std::fs::write(&canonical, stdout(&o)).unwrap();
    assert_eq!(stdout(&crux(&["parse", p(&canonical)])), stdout(&o));

    let json: Value = serde_json::from_str(&stdout(&crux(&["--json", "parse", p(&path)]))).unwrap();
    assert_eq!(json["routes"][0]["name"], "ladder");
}

#[test]
fn validation_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.crux");
    std::fs::write(&bad, "WALL 3 4\nPANEL 0 4 90\nHOLD h1 1.0 0.5 jug 1.5 hand 0\n").unwrap();
    let o = crux(&["parse", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("3:") && err.contains("RANGE"), "{err}");

    let far = dir.path().join("far.crux");
    std::fs::write(
        &far,
        "WALL 3 4.5\nPANEL 0 4.5 90\nHOLD a 1.5 0.5 jug 0.1 hand 0\nHOLD b 1.5 4.4 jug 0.1 hand 0\nROUTE r\nSTART a\nFINISH b\n",
    )
    .unwrap();
    let o = crux(&["beta", p(&far)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("UNREACHABLE"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(crux(&[]).status.code(), Some(64));
    assert_eq!(crux(&["climb"]).status.code(), Some(64));
    assert_eq!(crux(&["beta"]).status.code(), Some(64));
    assert_eq!(crux(&["grade", "x.crux", "--tnorm", "maximum"]).status.code(), Some(64));
    assert_eq!(crux(&["--seed", "minus-one", "parse", "x.crux"]).status.code(), Some(64));
    assert_eq!(crux(&["--help"]).status.code(), Some(0));
}

#[test]
fn internal_errors_exit_2() {
    let o = crux(&["vary", p(&fixture("ladder.crux")), "--out", "/nonexistent/dir/out.crux"]);
    assert_eq!(o.status.code(), Some(2));
}

/// The golden beta was produced by this command and checked against the
/// exhaustive planner; `CRUX_BLESS=1` regenerates it.
#[test]
fn beta_on_trap_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/trap_beta.json");
    let o = crux(&["--json", "beta", p(&fixture("trap.crux"))]);
    assert_eq!(o.status.code(), Some(0));
    if std::env::var_os("CRUX_BLESS").is_some() {
        std::fs::write(&golden, stdout(&o)).unwrap();
    }
    let expected = std::fs::read_to_string(&golden).unwrap();
    assert_eq!(stdout(&o), expected);

    let value: Value = serde_json::from_str(&expected).unwrap();
    let doc = crux_core::fixtures::trap();
    let (c, cfg) = (ClimberProfile::default(), ModelConfig::default());
    let oracle = Planner::new(&doc.routes[0], &doc.wall, &c, &cfg).unwrap().brute_force(8).unwrap();
    assert!((value["beta"]["total_cost"].as_f64().unwrap() - oracle.total_cost).abs() < 1e-9);
    assert_eq!(value["beta"]["moves"].as_array().unwrap().len(), oracle.moves.len());
}

#[test]
fn grading_twice_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let (trap, corpus) = (fixture("trap.crux"), corpus_dir());
    let args = ["--config", p(&config), "grade", p(&trap), "--corpus", p(&corpus), "--seed", "7"];
    let a = crux(&args);
    let b = crux(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("trap: 5."));

    let mut json_args = args.to_vec();
    json_args.insert(0, "--json");
    let v: Value = serde_json::from_str(&stdout(&crux(&json_args))).unwrap();
    assert_eq!(v["scores"].as_array().unwrap().len(), 3);
}

#[test]
fn corpus_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let (ladder, corpus) = (fixture("ladder.crux"), corpus_dir());
    let args = ["--json", "--config", p(&config), "grade", p(&ladder)];
    let with_flag = {
        let mut a = args.to_vec();
        a.extend(["--corpus", p(&corpus)]);
        stdout(&crux(&a))
    };
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_crux"))
        .args(args)
        .env("CRUX_CORPUS", corpus_dir())
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), with_flag);
    let missing = crux(&["grade", p(&fixture("ladder.crux")), "--corpus", "/nonexistent/corpus"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn vary_writes_a_valid_variation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.crux");
    let o = crux(&["vary", p(&fixture("ladder.crux")), "--intensity", "0.6", "--seed", "4", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, stdout(&o));
    let doc = parse_document(&written).unwrap();
    assert!(crux_core::validate::validate_route(&doc.routes[0], &doc.wall).ok);

    let same = crux(&["vary", p(&fixture("ladder.crux")), "--intensity", "0", "--seed", "4"]);
    let original = crux(&["parse", p(&fixture("ladder.crux"))]);
    assert_eq!(stdout(&same), stdout(&original));
    assert_eq!(crux(&["vary", p(&fixture("ladder.crux")), "--intensity", "1.5"]).status.code(), Some(1));
}

#[test]
fn simulate_agrees_with_the_model() {
    let o = crux(&["--json", "--seed", "11", "simulate", p(&fixture("trap.crux")), "--trials", "10000"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (f, q, se) = (v["frequency"].as_f64().unwrap(), v["success_probability"].as_f64().unwrap(), v["std_error"].as_f64().unwrap());
    assert!((f - q).abs() <= 3.0 * se, "{f} vs {q} +/- {se}");
    let falls: u64 = v["falls"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(falls + v["successes"].as_u64().unwrap(), 10000);
}

#[test]
fn generate_writes_route_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gen.json");
    std::fs::write(&config, r#"{"population": {"size": 100}, "generation": {"grading_population": 16}}"#).unwrap();
    let wall = dir.path().join("wall.crux");
    std::fs::write(&wall, "WALL 3 4.5\nPANEL 0 4.5 90\n").unwrap();
    let style = dir.path().join("style.json");
    std::fs::write(&style, r#"{"reach": 0.5, "match": 0.5}"#).unwrap();
    let run = |out: &Path| {
        crux(&[
            "--config", p(&config), "--seed", "5", "generate", "--wall", p(&wall), "--target-grade", "5.10a",
            "--target-style", p(&style), "--iterations", "20", "--corpus", p(&corpus_dir()), "--out", p(out),
        ])
    };
    let (a, b) = (dir.path().join("a.crux"), dir.path().join("b.crux"));
    let (oa, ob) = (run(&a), run(&b));
    assert_eq!(oa.status.code(), Some(0), "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(stdout(&oa), stdout(&ob));
    let report: Value = serde_json::from_str(&stdout(&oa)).unwrap();
    assert_eq!(report["iterations"], 20);
    assert_eq!(report["seed"], 5);
    let doc = parse_document(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert!(crux_core::validate::validate_route(&doc.routes[0], &doc.wall).ok);
}
