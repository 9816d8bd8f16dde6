use std::process::{Command, Output};

fn fresco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fresco")).args(args).current_dir(env!("CARGO_MANIFEST_DIR")).output().expect("run fresco")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn case(name: &str) -> String {
    format!("../../cases/{name}.json")
}

#[test]
fn bpoly_cubic() {
    let o = fresco(&["bpoly", "(a-3b)(a-2b)(a-b)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(x+1)^3");
}

#[test]
fn bpoly_with_leading_scalar() {
    let o = fresco(&["bpoly", "4^4*(a-13/4b)(a-5/2b)(a-7/4b)a"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "x(x+1/4)(x+1/2)(x+3/4)");
    assert!(String::from_utf8_lossy(&o.stderr).contains("leading scalar 256 ignored"));
}

#[test]
fn bpoly_errors_exit_2() {
    let o = fresco(&["bpoly", "b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("monic"));
    let o = fresco(&["bpoly", "a-"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 2"));
}

#[test]
fn xi_commands() {
    let o = fresco(&["xi", "(a-2b)(a-b)", "Log^2"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = fresco(&["xi", "b", "Log^1"]);
    assert_eq!(stdout(&o).trim(), "s*Log^1");
    let o = fresco(&["xi", "(a-3b)(a-2b)(a-b)", "s^1*Log^2", "--truncation", "8"]);
    assert!(stdout(&o).starts_with("1/24*s^4*Log^2"));
}

#[test]
fn analyze_omega1_json() {
    let o = fresco(&["analyze", &case("omega1")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bounds"]["bound"]["factored"], "(x+1)^3");
    assert_eq!(v["theme"]["second"]["factored"], "x+1");
    assert_eq!(v["certificate"]["root"], "-1");
    assert_eq!(v["annihilator"]["relation"]["kappa"], "1/L^4");
}

#[test]
fn analyze_omega2_keeps_two_candidates() {
    let o = fresco(&["analyze", &case("omega2"), "--format", "text"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("B^2 = x+3"), "{text}");
    assert!(text.contains("B in {(x+2)(x+3), (x+3)^2}"), "{text}");
}

#[test]
fn analyze_writes_out_file_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = fresco(&["analyze", &case("omega4"), "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn analyze_lambda_flag() {
    let o = fresco(&["analyze", &case("omega1"), "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fresco(&["analyze", &case("omega1"), "--lambda", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generator"]["v"], "-24");
    assert_eq!(v["generator"]["w"], "2520");
}

#[test]
fn analyze_missing_file_exits_2() {
    let o = fresco(&["analyze", "no/such/case.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_pipeline_failure_exits_3_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(format!("{}/{}", env!("CARGO_MANIFEST_DIR"), case("omega2"))).unwrap();
    std::fs::write(&path, text.replace("\"4a-8b\"", "\"4a-7b\"")).unwrap();
    let o = fresco(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["stage"], "theme");
    assert!(v["bounds"].is_object());
}

#[test]
fn reproduce_filter() {
    let o = fresco(&["reproduce", "--filter", "omega1."]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("appendix.omega1.chain_4444"));
    assert!(!text.contains("omega3"));
}
