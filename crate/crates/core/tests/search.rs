use kodaira_core::catalog;
use kodaira_core::search::{char2_family_scan, enumerate_and_filter, fixture, Char2Family};
use kodaira_core::transforms::reduce_mod_p;
use kodaira_core::{Error, Field};

#[test]
fn i14star_search_finds_the_reduction_of_p14() {
    let spec = fixture("i14star_f3").unwrap();
    let res = enumerate_and_filter(&spec, 1).unwrap();
    assert_eq!(res.candidates_scanned, 6561);
    assert_eq!(res.orbits.len(), 1);
    let m = catalog::entry("P14").unwrap().file.model().unwrap();
    let idx = spec.index_of(reduce_mod_p(&m, &spec.field).unwrap().coeffs()).unwrap();
    assert!(res.orbits[0].members.contains(&idx));
}

#[test]
fn i15star_has_no_survivors() {
    let res = enumerate_and_filter(&fixture("i15star_f3").unwrap(), 1).unwrap();
    assert!(res.survivors.is_empty());
    assert!(res.orbits.is_empty());
}

#[test]
fn budget_is_enforced_before_scanning() {
    let mut spec = fixture("i19_f3").unwrap();
    spec.budget = 100;
    match enumerate_and_filter(&spec, 1) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            assert_eq!(needed, 177_147);
            assert_eq!(budget, 100);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn char2_families() {
    let f4 = Field::finite(2, 2).unwrap();
    let f8 = Field::finite(2, 3).unwrap();
    for (fam, f) in [
        (Char2Family::Fam13W, &f4),
        (Char2Family::Fam18C2A, &f8),
        (Char2Family::Fam18C2B, &f8),
    ] {
        let scan = char2_family_scan(fam, f, 1 << 30).unwrap();
        assert!(scan.passed, "{scan}");
    }
}

#[test]
fn family_scan_needs_characteristic_two() {
    let f3 = Field::prime(3).unwrap();
    assert!(char2_family_scan(Char2Family::Fam13W, &f3, 1 << 20).is_err());
}
