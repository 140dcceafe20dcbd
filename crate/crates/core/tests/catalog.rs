use kodaira_core::catalog::{self, equal_up_to_scalar};
use kodaira_core::modelfile::ModelFile;
use kodaira_core::surface::{analyze, parse_configuration, SurfaceClass};
use kodaira_core::transforms::{frobenius_base_change, minimalize_all, reduce_mod_p};
use kodaira_core::{Error, Field, KodairaType, Poly};

#[test]
fn every_bundled_entry_verifies() {
    let reports: Vec<_> = catalog::entries().iter().map(catalog::verify_entry).collect();
    assert_eq!(reports.len(), 12);
    for r in &reports {
        assert!(r.passed, "{} failed", r.id);
    }
}

#[test]
fn every_pipeline_passes() {
    for p in catalog::pipelines() {
        assert!(p.passed, "{}: {}", p.name, p.detail);
    }
}

#[test]
fn p14_over_q() {
    let m = catalog::entry("P14").unwrap().file.model().unwrap();
    let rep = analyze(&m).unwrap();
    assert_eq!(rep.configuration, "[14*,1,1,1,1]");
    assert_eq!(rep.type_at_infinity(), KodairaType::IStar(14));
    assert_eq!(rep.euler_number, 24);
    assert_eq!(rep.surface_class, SurfaceClass::K3);
    let want = Poly::from_i64s(&Field::rationals(), &[32, 0, 13, 0, 4]);
    assert!(equal_up_to_scalar(&rep.delta_min, &want));
}

#[test]
fn e9_frobenius_in_char_2() {
    let m = catalog::entry("E9").unwrap().file.model().unwrap();
    let m2 = reduce_mod_p(&m, &Field::prime(2).unwrap()).unwrap();
    let fr = minimalize_all(&frobenius_base_change(&m2).unwrap()).unwrap();
    let rep = analyze(&fr).unwrap();
    assert_eq!(rep.configuration, "[18,2,2,2]");
    assert_eq!(rep.insep_degree, Some(1));
}

#[test]
fn reduction_at_a_denominator_prime_is_rejected() {
    let src = "version = 1\ncharacteristic = 0\nform = \"short\"\na4 = [\"1/3\", 1]\na6 = [0, 0, 1]\n";
    let m = ModelFile::parse(src).unwrap().model().unwrap();
    let err = reduce_mod_p(&m, &Field::prime(3).unwrap()).unwrap_err();
    assert!(matches!(err, Error::BadPrime { p: 3, .. }), "{err}");
}

#[test]
fn configuration_strings_round_trip() {
    for e in catalog::entries() {
        if let Some(c) = e.file.expect.as_ref().and_then(|x| x.configuration.clone()) {
            let types = parse_configuration(&c).unwrap();
            assert_eq!(kodaira_core::surface::configuration_string(&types), c);
        }
    }
}
