mod common;

use common::{assert_valid, fixture, run, stdout, validator};
use serde_json::Value;

fn json(o: &std::process::Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("report is JSON")
}

#[test]
fn worked_example_report() {
    let rec = fixture("249.a").to_csv_line();
    let out = run(&["run", &rec, "--bound", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_valid(&validator(), stdout(&out).trim());
    let r = json(&out);
    assert_eq!(r["possibly_nonsurjective"], serde_json::json!([2, 3, 5, 7, 83]));
    let likely: Vec<u64> = serde_json::from_value(r["likely_nonsurjective"].clone()).unwrap();
    assert!(likely.iter().all(|l| [2, 3, 5, 7].contains(l)), "{likely:?}");
    assert!(r["provenance"]["83"].as_array().unwrap().iter().any(|s| s == "divides_conductor"));
    assert!(r.get("witnesses").is_none());
}

#[test]
fn verbose_lists_witnesses() {
    let rec = fixture("249.a").to_csv_line();
    let out = run(&["run", &rec, "--verbose"]);
    assert_eq!(out.status.code(), Some(0));
    assert_valid(&validator(), stdout(&out).trim());
    let r = json(&out);
    let w = r["witnesses"].as_object().unwrap();
    // 83 is ruled out, so every test it needs has a witness
    assert!(w.contains_key("83"));
}

#[test]
fn extra_endomorphisms_exit_code() {
    let rec = fixture("169.a").to_csv_line();
    let out = run(&["run", &rec]);
    assert_eq!(out.status.code(), Some(4));
    assert_valid(&validator(), stdout(&out).trim());
    let r = json(&out);
    assert!(r["likely_nonsurjective"].is_null());
    assert_eq!(r["errors"][0]["kind"], "EndomorphismSuspected");
    assert_eq!(r["errors"][0]["sites"], serde_json::json!(["alg_related"]));
}

#[test]
fn malformed_record_is_a_parse_error() {
    for bad in ["x,1;2,zz,5", "x,1;2,1", "x,1;two,1,5", "x,1;2,1,0"] {
        let out = run(&["run", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(out.stdout.is_empty(), "{bad}");
    }
}

#[test]
fn singular_model_is_reported_not_crashed() {
    // y^2 = x^2 (x - 1)^2 (x + 1)^2 is singular
    let out = run(&["run", "sing,0;0;1;0;-2;0;1,,1"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn missing_hecke_data_exit_code() {
    let rec = fixture("47089.a").to_csv_line();
    let out = run(&["run", &rec, "--no-bundled"]);
    assert_eq!(out.status.code(), Some(3));
    assert_valid(&validator(), stdout(&out).trim());
    let r = json(&out);
    assert_eq!(r["errors"][0]["kind"], "MissingHeckeData");
    assert!(r["errors"][0]["level"].as_u64().is_some());
}

#[test]
fn grh_bound_output_modes_agree() {
    let exact = stdout(&run(&["grh-bound", "7", "249"]));
    let sci = stdout(&run(&["grh-bound", "7", "249", "--scientific"]));
    let e: f64 = exact.trim().parse().unwrap();
    let s: f64 = sci.trim().parse().unwrap();
    assert!((3.574e23..=3.582e23).contains(&e), "{exact}");
    assert!(((e - s) / e).abs() < 1e-4, "{exact} vs {sci}");
    assert!(exact.trim().chars().all(|c| c.is_ascii_digit()));
}

#[test]
fn grh_bound_small_case_is_exact() {
    let out = run(&["grh-bound", "2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let b: u128 = stdout(&out).trim().parse().unwrap();
    assert_eq!(b, abelsurf_core::verify::grh_bound(2, 1));
    assert!(run(&["grh-bound", "1", "5"]).status.code() == Some(2));
}

#[test]
fn oracle_small_c_sets() {
    let out = run(&["oracle", "--c-sets", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["passed"], true);
    assert!(run(&["oracle"]).status.code() == Some(2));
}
