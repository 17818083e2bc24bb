use golay3::catalog::{ArrayMethod, Catalog, CatalogStore, Pruning, StoreOptions};
use golay3::equivalence::{classify, Provenance};
use golay3::search::{brute_force_sequence_triads, search_array_triads, search_sequence_triads, SearchOptions};
use golay3::theory::{assert_nonexistence, check_periodic_two_of_three, check_product_property, periodic_golay_triads};
use golay3::{Error, Triad};

fn store(method: ArrayMethod) -> CatalogStore {
    CatalogStore::new(StoreOptions { compute: true, array_method: method, ..Default::default() })
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("golay3-{tag}-{}", std::process::id()));
    std::fs::remove_dir_all(&dir).ok();
    dir
}

#[test]
fn search_matches_brute_force() {
    for s in 2..=7 {
        let fast = search_sequence_triads(s, &SearchOptions::default()).unwrap();
        assert_eq!(fast, brute_force_sequence_triads(s).unwrap(), "length {s}");
    }
}

#[test]
fn pruning_keeps_every_class() {
    let pruned = SearchOptions { symmetry_pruning: true, ..Default::default() };
    for s in 2..=10 {
        let full = classify(search_sequence_triads(s, &SearchOptions::default()).unwrap(), Provenance::Searched).unwrap();
        let part = classify(search_sequence_triads(s, &pruned).unwrap(), Provenance::Searched).unwrap();
        assert_eq!(full, part, "length {s}");
    }
}

#[test]
fn direct_array_search_agrees_with_derivation() {
    let derived = store(ArrayMethod::Derive);
    let direct = store(ArrayMethod::Direct);
    for shape in [vec![2, 3], vec![3, 3], vec![2, 4], vec![2, 5], vec![2, 6], vec![3, 4]] {
        let classes = |c: &Catalog| c.classes().iter().map(|k| (k.representative.clone(), k.orbit_size)).collect::<Vec<_>>();
        assert_eq!(classes(&derived.get(&shape).unwrap()), classes(&direct.get(&shape).unwrap()), "{shape:?}");
    }
}

#[test]
fn unpruned_array_search_keeps_every_class() {
    let full = search_array_triads(&[3, 3], &SearchOptions::default()).unwrap();
    let pruned = search_array_triads(&[3, 3], &SearchOptions { symmetry_pruning: true, ..Default::default() }).unwrap();
    assert!(pruned.is_subset(&full));
    let a = Catalog::classify(&[3, 3], full, Provenance::Searched).unwrap();
    let b = Catalog::classify(&[3, 3], pruned, Provenance::Searched).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 11);
}

#[test]
fn validate_mode_runs_both_searches() {
    let s = CatalogStore::new(StoreOptions { compute: true, pruning: Pruning::Validate, ..Default::default() });
    assert_eq!(s.get(&[9]).unwrap().len(), 105);
}

#[test]
fn catalog_round_trip_is_byte_identical() {
    let s = store(ArrayMethod::Auto);
    for shape in [vec![6], vec![3, 3], vec![4]] {
        let text = s.get(&shape).unwrap().to_jsonl();
        let again = Catalog::from_jsonl(&text, Some(&shape)).unwrap().to_jsonl();
        assert_eq!(text, again);
    }
}

#[test]
fn cache_directory_is_reused() {
    let dir = tempdir("cache");
    let options = StoreOptions { cache_dir: Some(dir.clone()), compute: true, ..Default::default() };
    let first = CatalogStore::new(options.clone()).get(&[7]).unwrap();
    assert!(dir.join("catalog-7.jsonl").exists());
    let offline = CatalogStore::new(StoreOptions { compute: false, ..options });
    assert_eq!(*offline.get(&[7]).unwrap(), *first);
    assert!(matches!(offline.get(&[8]), Err(Error::IncompleteCatalog(_))));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn shapes_are_canonicalised() {
    let s = store(ArrayMethod::Auto);
    assert_eq!(*s.get(&[3, 2]).unwrap(), *s.get(&[2, 3]).unwrap());
    assert_eq!(*s.get(&[1, 5, 1]).unwrap(), *s.get(&[5]).unwrap());
}

#[test]
fn product_property_on_catalogs() {
    let s = store(ArrayMethod::Auto);
    for shape in [vec![9], vec![11], vec![12], vec![2, 7], vec![3, 3]] {
        for t in s.get(&shape).unwrap().expanded() {
            assert!(check_product_property(t), "{t}");
        }
    }
}

#[test]
fn nonexistence_small() {
    let s = store(ArrayMethod::Auto);
    for shape in [vec![4], vec![10], vec![2, 2]] {
        let r = assert_nonexistence(&shape, &s).unwrap();
        assert!(r.is_empty() && r.predicted, "{shape:?}");
    }
    assert!(matches!(assert_nonexistence(&[5], &s), Err(Error::Precondition(_))));
    let r = assert_nonexistence(&[2, 6], &s).unwrap();
    assert!(r.is_empty() && !r.predicted);
}

#[test]
fn periodic_length_four_exhaustive() {
    let all = periodic_golay_triads(4).unwrap();
    assert!(all.contains(&Triad::sequences(&[0, 0, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap()));
    for t in &all {
        assert!(check_periodic_two_of_three(t).unwrap(), "{t}");
    }
}
