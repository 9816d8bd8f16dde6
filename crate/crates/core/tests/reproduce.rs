use fresco_core::reproduce::{chain_check, corpus, render_table, run_checks, run_corpus};

#[test]
fn injected_sign_flip_names_the_identity() {
    let checks = vec![
        chain_check("chain_123", [0, 0, 0], vec![1, 2, 3], "-(a-3b)(a-2b)(a-b)"),
        chain_check("chain_123_flipped", [0, 0, 0], vec![1, 2, 3], "(a-3b)(a-2b)(a-b)"),
    ];
    let results = run_corpus(&checks);
    assert!(results[0].passed);
    assert!(!results[1].passed);
    let table = render_table(&results);
    let row = table.lines().find(|l| l.contains("FAIL")).unwrap();
    assert!(row.contains("chain_123_flipped"), "{row}");
    assert!(table.ends_with("2 checks, 1 failed\n"));
}

#[test]
fn filter_selects_a_subset() {
    let all = corpus().len();
    let some = run_checks(Some("bpoly."));
    assert_eq!(some.len(), 5);
    assert!(some.len() < all);
    assert!(some.iter().all(|r| r.passed));
}

#[test]
fn every_criterion_has_checks() {
    let c = corpus();
    for k in 1..=9 {
        assert!(c.iter().any(|x| x.criterion == k), "criterion {k}");
    }
    let mut names: Vec<&str> = c.iter().map(|x| x.name.as_str()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), c.len());
}
