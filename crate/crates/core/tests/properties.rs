use proptest::prelude::*;

use kodaira_core::localfibre::tate_at;
use kodaira_core::modelfile::ModelFile;
use kodaira_core::surface::{analyze_with, sort_types, FieldExtension};
use kodaira_core::transforms::{apply_coord_change, apply_mobius, CoordChange, MobiusMap};
use kodaira_core::weierstrass::WEIGHTS;
use kodaira_core::{Field, FieldElem, Place, Poly, RatFunc, WModel};

fn field(i: usize) -> Field {
    let (p, n) = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4)][i];
    Field::finite(p, n).unwrap()
}

fn poly(f: &Field, codes: &[u64]) -> Poly {
    let q = f.order().unwrap();
    Poly::new(f, codes.iter().map(|c| f.element(c % q)).collect())
}

fn model(f: &Field, raw: &[Vec<u64>; 5]) -> Option<WModel> {
    let a: [Poly; 5] = std::array::from_fn(|i| {
        let c = &raw[i][..raw[i].len().min(2 * WEIGHTS[i] as usize + 1)];
        poly(f, c)
    });
    WModel::new(a, Some(2)).ok()
}

fn coeffs() -> impl Strategy<Value = [Vec<u64>; 5]> {
    prop::array::uniform5(prop::collection::vec(0u64..1000, 0..8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(fi in 0usize..7, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let f = field(fi);
        let q = f.order().unwrap();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a.clone());
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
        let r = f.pth_root(&a);
        prop_assert_eq!(f.pow(&r, f.characteristic() as u64), a);
    }

    #[test]
    fn rational_axioms(a in -50i64..50, b in -50i64..50, c in 1i64..50) {
        let q = Field::rationals();
        let x = q.div(&q.from_i64(a), &q.from_i64(c)).unwrap();
        let y = q.from_i64(b);
        prop_assert_eq!(q.sub(&q.add(&x, &y), &y), x.clone());
        prop_assert_eq!(q.mul(&q.div(&x, &q.from_i64(c)).unwrap(), &q.from_i64(c)), x);
    }

    #[test]
    fn division_with_remainder(fi in 0usize..7, a in prop::collection::vec(0u64..1000, 0..10),
                               d in prop::collection::vec(0u64..1000, 1..6)) {
        let f = field(fi);
        let (a, d) = (poly(&f, &a), poly(&f, &d));
        prop_assume!(!d.is_zero());
        let (q, r) = a.divmod(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, a.clone());
        prop_assert!(r.deg_i() < d.deg_i());
        let g = a.gcd(&d).unwrap();
        prop_assert!(g.divides(&a) && g.divides(&d));
    }

    #[test]
    fn composition_matches_evaluation(fi in 0usize..7, a in prop::collection::vec(0u64..1000, 0..6),
                                      g in prop::collection::vec(0u64..1000, 0..4), x in 0u64..1000) {
        let f = field(fi);
        let (a, g) = (poly(&f, &a), poly(&f, &g));
        let x = f.element(x % f.order().unwrap());
        prop_assert_eq!(a.compose(&g).eval(&x), a.eval(&g.eval(&x)));
    }

    #[test]
    fn coordinate_changes_preserve_j_and_scale_delta(
        fi in 0usize..7, raw in coeffs(), u in 1u64..1000,
        r in prop::collection::vec(0u64..1000, 0..3),
        s in prop::collection::vec(0u64..1000, 0..2),
        t in prop::collection::vec(0u64..1000, 0..4),
    ) {
        let f = field(fi);
        let Some(m) = model(&f, &raw) else { return Ok(()) };
        let q = f.order().unwrap();
        let u = f.element(1 + u % (q - 1));
        let c = CoordChange::new(
            RatFunc::constant(&f, u.clone()),
            RatFunc::from_poly(poly(&f, &r)),
            RatFunc::from_poly(poly(&f, &s)),
            RatFunc::from_poly(poly(&f, &t)),
        ).unwrap();
        let Ok(m2) = apply_coord_change(&m, &c) else { return Ok(()) };
        prop_assert_eq!(m2.j_invariant(), m.j_invariant());
        let u12 = f.pow(&u, 12);
        prop_assert_eq!(m2.discriminant().scale(&u12), m.discriminant());
        let back = apply_coord_change(&m2, &c.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.coeffs(), m.coeffs());
    }

    #[test]
    fn translations_preserve_local_data(fi in 0usize..4, raw in coeffs(),
                                        r in prop::collection::vec(0u64..1000, 0..3),
                                        t in prop::collection::vec(0u64..1000, 0..4)) {
        let f = field(fi);
        let Some(m) = model(&f, &raw) else { return Ok(()) };
        let c = CoordChange::translation(poly(&f, &r), Poly::zero(&f), poly(&f, &t));
        let Ok(m2) = apply_coord_change(&m, &c) else { return Ok(()) };
        let Ok(m2) = m2.with_flip_weight(m.flip_weight()) else { return Ok(()) };
        for place in [Place::Finite(FieldElem::from_i64(&f, 0)), Place::Infinity] {
            let (x, y) = (tate_at(&m, &place).unwrap(), tate_at(&m2, &place).unwrap());
            prop_assert_eq!((x.kodaira, x.conductor_exp, x.wild_index),
                            (y.kodaira, y.conductor_exp, y.wild_index));
        }
    }

    #[test]
    fn mobius_preserves_configuration(fi in 0usize..4, raw in coeffs(), a in 0u64..9, b in 0u64..9,
                                      c in 0u64..9, d in 0u64..9) {
        let f = field(fi);
        let Some(m) = model(&f, &raw) else { return Ok(()) };
        let q = f.order().unwrap();
        let e = |x: u64| f.elem(f.element(x % q));
        let Ok(mm) = MobiusMap::new(e(a), e(b), e(c), e(d)) else { return Ok(()) };
        let m2 = apply_mobius(&m, &mm).unwrap();
        let (r1, r2) = (
            analyze_with(&m, FieldExtension::Auto).unwrap(),
            analyze_with(&m2, FieldExtension::Auto).unwrap(),
        );
        let (mut t1, mut t2) = (r1.types(), r2.types());
        sort_types(&mut t1);
        sort_types(&mut t2);
        prop_assert_eq!(t1, t2);
        prop_assert_eq!(r1.euler_number, r2.euler_number);
    }

    #[test]
    fn model_files_round_trip(fi in 0usize..7, raw in coeffs()) {
        let f = field(fi);
        let Some(m) = model(&f, &raw) else { return Ok(()) };
        let text = ModelFile::from_model(&m, Some("X".into())).to_toml();
        let back = ModelFile::parse(&text).unwrap().model().unwrap();
        prop_assert_eq!(back, m);
    }
}
