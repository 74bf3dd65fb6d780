mod common;

use proptest::prelude::*;

use common::*;
use matrix_diagrams::arrangement::{tits_product, Arrangement, DEFAULT_FACE_BUDGET};
use matrix_diagrams::{ProductCell, Strata};

fn strata(arr: Arrangement) -> Strata {
    Strata::new(arr, DEFAULT_FACE_BUDGET).unwrap()
}

fn sorted(mut v: Vec<Vec<matrix_diagrams::FaceId>>) -> Vec<Vec<matrix_diagrams::FaceId>> {
    for c in &mut v {
        c.sort();
    }
    v.sort();
    v
}

#[test]
fn keys_on_the_line() {
    let s = strata(Arrangement::boolean(1));
    let zero = s.real().parse("0").unwrap();
    for c in s.cells() {
        let k = s.key(c);
        if c == ProductCell::new(zero, zero) {
            assert_eq!(k.0, vec![0]);
        } else {
            assert!(k.0.is_empty());
        }
    }
    assert_eq!(s.keys().len(), 2);
}

#[test]
fn keys_of_two_points() {
    let s = strata(Arrangement::points_on_line(&[0, 1]));
    let zero = s.imag().parse("0").unwrap();
    let at0 = s.real().parse("0-").unwrap();
    let between = s.real().parse("+-").unwrap();
    assert_eq!(s.key(ProductCell::new(zero, at0)).0, vec![0]);
    assert!(s.key(ProductCell::new(zero, between)).0.is_empty());
    assert_eq!(s.cells().len(), 15);
    assert!(s.tau(ProductCell::new(zero, at0)).is_err());
}

#[test]
fn s1_classes_on_the_line() {
    let s = strata(Arrangement::boolean(1));
    let f = |l: &str| s.real().parse(l).unwrap();
    assert_eq!(sorted(s.s1_classes(f("0"))), sorted(vec![vec![f("-")], vec![f("0")], vec![f("+")]]));
    assert_eq!(sorted(s.s1_classes(f("+"))), vec![vec![f("-"), f("0"), f("+")]]);
    assert!(s.s1_membership_direct(f("0"), f("+"), f("+")).unwrap());
    assert!(!s.s1_membership_direct(f("0"), f("+"), f("-")).unwrap());
    assert!(s.s1_membership_direct(f("+"), f("+"), f("-")).unwrap());
    assert!(s.s1_membership_direct(f("+"), f("0"), f("-")).is_err());
}

/// Closure of the generating relation against the direct sign condition, for every face.
fn check_s1(s: &Strata) {
    for c in s.real().ids() {
        assert_eq!(sorted(s.s1_classes(c)), sorted(s.s1_partition_direct(c).unwrap()), "C = {}", s.real().label(c));
        assert!(s.s1_classes(c).iter().any(|class| class.contains(&c)));
    }
}

/// Same stratum along a chain `A1 ≤ A2` iff the Tits products agree, in both directions.
fn check_tits_criterion(s: &Strata) {
    let p = s.real();
    for b in p.ids() {
        for a1 in p.ids() {
            for a2 in p.ids().filter(|&a2| p.leq(a1, a2)) {
                let by_key = s.same_stratum(ProductCell::new(a1, b), ProductCell::new(a2, b));
                let by_tits = tits_product(p, b, a1).unwrap() == tits_product(p, b, a2).unwrap();
                assert_eq!(by_key, by_tits);
                let by_key = s.same_stratum(ProductCell::new(b, a1), ProductCell::new(b, a2));
                let by_tits = tits_product(p, b, a1).unwrap() == tits_product(p, b, a2).unwrap();
                assert_eq!(by_key, by_tits);
            }
        }
    }
}

fn check_enlargement(s: &Strata) {
    let (real, imag) = (s.real(), s.imag());
    for d in imag.ids() {
        for c1 in real.ids() {
            for c2 in real.ids() {
                if !s.same_stratum(ProductCell::new(d, c1), ProductCell::new(d, c2)) {
                    continue;
                }
                for a in imag.faces_above(d) {
                    assert!(s.same_stratum(ProductCell::new(a, c1), ProductCell::new(a, c2)));
                }
            }
        }
    }
}

fn check_tau(s: &Strata) {
    for c in s.cells() {
        let t = s.tau(c).unwrap();
        assert_eq!(s.tau(t).unwrap(), c);
        assert_eq!(s.key(t), s.key(c));
    }
}

#[test]
fn stratification_coherence() {
    for (name, arr) in central_arrangements() {
        let s = strata(arr);
        check_s1(&s);
        check_tits_criterion(&s);
        check_enlargement(&s);
        check_tau(&s);
        eprintln!("{name}: ok");
    }
    for (_, arr) in affine_arrangements() {
        check_enlargement(&strata(arr));
    }
}

#[test]
fn key_codimension_is_rank() {
    for (_, arr) in central_arrangements().into_iter().chain(affine_arrangements()) {
        let s = strata(arr);
        for k in s.keys() {
            assert_eq!(s.codim(&k), s.arrangement().rank_of(&k.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_central_coherence(arr in arb_central()) {
        let s = strata(arr);
        check_s1(&s);
        check_tits_criterion(&s);
        check_enlargement(&s);
        check_tau(&s);
    }

    #[test]
    fn random_affine_enlargement(arr in arb_affine()) {
        check_enlargement(&strata(arr));
    }
}
