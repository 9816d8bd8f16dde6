//! One line per acceptance criterion. Criteria listed in
//! `KNOWN_DEVIATIONS` are expected to fail; the ledger explains each one.
//! The test fails when the set of failing criteria differs from that list,
//! in either direction.

use std::collections::BTreeSet;
use std::process::Command;

use fresco_core::reproduce::{corpus, run_corpus, CheckResult};

/// Criterion 5: the omega3 first Bernstein polynomial is undetermined, so
/// its full Bernstein polynomial is a two-element candidate set.
/// Criterion 10: `fresco reproduce` exits 1 because of that row.
const KNOWN_DEVIATIONS: [u8; 2] = [5, 10];

const TITLES: [&str; 10] = [
    "omega1 chain, step outputs and annihilator",
    "Bernstein polynomial goldens",
    "factorization identity",
    "Bernstein bounds for omega1..omega4",
    "second and full Bernstein polynomials via Theta",
    "generator lemma numerics and omega3 image",
    "property suites",
    "lemma check and pole certificates",
    "truncation stability at N = 16",
    "fresco reproduce exits 0",
];

#[test]
fn acceptance() {
    let results = run_corpus(&corpus());
    let mut failing = BTreeSet::new();
    for criterion in 1..=9u8 {
        let rows: Vec<&CheckResult> = results.iter().filter(|r| r.criterion == criterion).collect();
        assert!(!rows.is_empty(), "criterion {criterion} has no checks");
        let bad: Vec<&&CheckResult> = rows.iter().filter(|r| !r.passed).collect();
        let verdict = if bad.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {criterion:>2} {verdict}  {} ({} checks)", TITLES[criterion as usize - 1], rows.len());
        for r in &bad {
            println!("    {}: {}", r.name, r.detail);
        }
        if !bad.is_empty() {
            failing.insert(criterion);
        }
    }

    let out = Command::new(env!("CARGO_BIN_EXE_fresco")).arg("reproduce").output().expect("run fresco");
    let code = out.status.code();
    let verdict = if code == Some(0) { "PASS" } else { "FAIL" };
    println!("criterion 10 {verdict}  {} (exit {code:?})", TITLES[9]);
    if code != Some(0) {
        failing.insert(10);
    }
    let table = String::from_utf8_lossy(&out.stdout);
    let table_failures = table.lines().filter(|l| l.contains(" FAIL ")).count();
    let corpus_failures = results.iter().filter(|r| !r.passed).count();
    assert_eq!(table_failures, corpus_failures, "binary and library disagree:\n{table}");

    let known: BTreeSet<u8> = KNOWN_DEVIATIONS.into_iter().collect();
    println!("failing criteria {failing:?}, known deviations {known:?}");
    assert_eq!(failing, known, "failing criteria differ from the documented deviations");
}
