use golay3::catalog::{CatalogStore, StoreOptions};
use golay3::construct::{default_seeds, explain, parse_triad_lines, published_unexplained, ExplainOptions};
use golay3::equivalence::OrbitEngine;
use golay3::{is_golay_triad, Error};

fn run(budget: usize) -> golay3::construct::ExplanationReport {
    let store = CatalogStore::new(StoreOptions { compute: true, ..Default::default() });
    explain(&default_seeds(), &store, &ExplainOptions { budget, ..Default::default() }).unwrap()
}

#[test]
fn small_budget_matches_published_counts() {
    let report = run(15);
    let expect = [
        (vec![3], 0, "all"),
        (vec![6], 1, "some (*)"),
        (vec![9], 36, "some"),
        (vec![14], 55, "some"),
        (vec![15], 51, "some"),
        (vec![5], 3, "seeds"),
        (vec![2], 1, "trivial seed"),
        (vec![2, 3], 0, "all"),
        (vec![3, 3], 0, "all"),
        (vec![2, 7], 0, "all"),
        (vec![3, 5], 0, "all"),
    ];
    for (shape, n, status) in expect {
        let r = &report.shapes[&shape];
        assert_eq!((r.unexplained.len(), r.status().as_str()), (n, status), "{shape:?}");
    }
    assert_eq!(report.shapes[&vec![6]].summary(), "9 explained, 1 unexplained");
}

#[test]
fn length_six_unexplained_class_is_the_published_one() {
    let report = run(6);
    let six = &report.shapes[&vec![6]];
    let engine = OrbitEngine::new(&[6]);
    let published: Vec<_> = published_unexplained().into_iter().filter(|t| t.shape() == [6]).collect();
    assert_eq!(published.len(), 1);
    assert_eq!(six.unexplained[0].representative, engine.representative(&published[0]).unwrap());
}

#[test]
fn explained_classes_are_golay_with_derivations() {
    let report = run(9);
    for r in report.shapes.values() {
        for e in &r.explained {
            assert!(is_golay_triad(&e.class.representative));
            assert!(e.derivation[0].starts_with("seed "), "{:?}", e.derivation);
            assert!(e.derivation.len() >= 2);
        }
    }
    assert!(report.to_dot().starts_with("digraph"));
}

#[test]
fn unknown_seed_is_rejected() {
    let store = CatalogStore::new(StoreOptions { compute: true, ..Default::default() });
    let bogus = parse_triad_lines("5 00000 00000 00000\n").unwrap();
    let out = explain(&bogus, &store, &ExplainOptions { budget: 6, ..Default::default() });
    assert!(matches!(out, Err(Error::UnknownSeed(_))));
}

#[test]
fn seed_file_errors_carry_line_numbers() {
    match parse_triad_lines("5\n# comment\n5 0001 01221 00212\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}
