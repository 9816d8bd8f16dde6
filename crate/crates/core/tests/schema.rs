use fresco_core::case::{run_case, CaseFile, RunOptions};
use serde_json::Value;

const CASES: [&str; 4] = ["omega1", "omega2", "omega3", "omega4"];

fn read(rel: &str) -> String {
    std::fs::read_to_string(format!("{}/../../cases/{rel}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn validator(name: &str) -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(&read(name)).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, instance: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

#[test]
fn case_files_match_schema() {
    let v = validator("case.schema.json");
    for name in CASES {
        let doc: Value = serde_json::from_str(&read(&format!("{name}.json"))).unwrap();
        assert_valid(&v, &doc, name);
    }
}

#[test]
fn schema_rejects_unknown_fields() {
    let v = validator("case.schema.json");
    let mut doc: Value = serde_json::from_str(&read("omega1.json")).unwrap();
    doc["surprise"] = Value::Bool(true);
    assert!(!v.is_valid(&doc));
}

#[test]
fn reports_match_schema() {
    let v = validator("report.schema.json");
    for name in CASES {
        let case = CaseFile::from_json(&read(&format!("{name}.json"))).unwrap();
        let report = run_case(&case, &RunOptions::default()).unwrap().report;
        assert_valid(&v, &report.to_value(), name);
    }
}
