#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use abelsurf::curves::{parse_curves, CurveRecord};
use abelsurf::BUNDLED_CURVES;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abelsurf"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn abelsurf")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Bundled fixture curve by label prefix, e.g. `"249.a"`.
pub fn fixture(prefix: &str) -> CurveRecord {
    parse_curves(BUNDLED_CURVES)
        .into_iter()
        .filter_map(Result::ok)
        .find(|r| r.label.starts_with(prefix))
        .unwrap_or_else(|| panic!("no fixture {prefix}"))
}

pub fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json")
}

pub fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(schema_path()).expect("schema file");
    let schema: serde_json::Value = serde_json::from_str(&text).expect("schema is JSON");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Panics with every violation when `line` does not match the schema.
pub fn assert_valid(v: &jsonschema::Validator, line: &str) {
    let doc: serde_json::Value = serde_json::from_str(line).expect("output line is JSON");
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{line}\n{errors:#?}");
}
