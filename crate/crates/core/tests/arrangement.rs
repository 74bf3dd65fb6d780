mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use matrix_diagrams::arrangement::{
    enumerate_faces, flats, tits_product, Arrangement, ArrangementError, FacePoset, Hyperplane, Mode, DEFAULT_FACE_BUDGET,
};

fn poset(arr: &Arrangement) -> FacePoset {
    enumerate_faces(arr, DEFAULT_FACE_BUDGET).unwrap()
}

#[test]
fn face_counts() {
    for n in 1..=3 {
        assert_eq!(poset(&Arrangement::boolean(n)).len(), 3usize.pow(n as u32));
    }
    for m in 2..=4 {
        assert_eq!(poset(&Arrangement::concurrent_lines(m)).len(), 4 * m + 1);
    }
    for k in 1..=4 {
        let pts: Vec<i64> = (0..k).collect();
        assert_eq!(poset(&Arrangement::points_on_line(&pts)).len(), 2 * k as usize + 1);
    }
    // three planes of the braid arrangement meet in a line: 6 chambers, 6 walls, the line
    assert_eq!(poset(&central_arrangements()[4].1).len(), 13);
}

#[test]
fn tits_laws_hold_exhaustively() {
    for (name, arr) in central_arrangements().into_iter().take(4) {
        let p = poset(&arr);
        let t = |b, a| tits_product(&p, b, a).unwrap();
        for b in p.ids() {
            for a in p.ids() {
                let ba = t(b, a);
                assert!(p.leq(b, ba), "{name}");
                let zs: Vec<usize> = p.zero_set(b).into_iter().filter(|i| p.zero_set(a).contains(i)).collect();
                assert_eq!(p.zero_set(ba), zs, "{name}: zero set of {}∘{}", p.label(b), p.label(a));
                for a2 in p.ids().filter(|&a2| p.leq(a, a2)) {
                    assert!(p.leq(ba, t(b, a2)), "{name}: monotonicity");
                }
                for c in p.ids() {
                    assert_eq!(t(t(c, b), a), t(c, ba), "{name}: associativity");
                }
            }
        }
    }
}

#[test]
fn tits_matches_perturbation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let Some(arr) = random_central(&mut rng, 3, 4) else { continue };
        let p = poset(&arr);
        for _ in 0..50 {
            let b = p.ids().nth(rng.gen_range(0..p.len())).unwrap();
            let a = p.ids().nth(rng.gen_range(0..p.len())).unwrap();
            assert_eq!(tits_product(&p, b, a).unwrap(), tits_by_perturbation(&arr, &p, b, a));
            checked += 1;
        }
    }
}

#[test]
fn tits_needs_a_central_arrangement() {
    let p = poset(&Arrangement::points_on_line(&[0, 1]));
    let f = p.ids().next().unwrap();
    assert!(matches!(tits_product(&p, f, f), Err(ArrangementError::NotCentral)));
}

#[test]
fn flats_of_small_arrangements() {
    assert_eq!(flats(&Arrangement::boolean(3)).len(), 8);
    // the plane, three lines, the origin
    assert_eq!(flats(&Arrangement::concurrent_lines(3)).len(), 5);
}

#[test]
fn malformed_arrangements() {
    assert!(matches!(
        Arrangement::new(1, vec![Hyperplane::linear(&[1]), Hyperplane::linear(&[1])], Mode::Central),
        Err(ArrangementError::DuplicateHyperplane { .. })
    ));
    assert!(matches!(Arrangement::central(2, &[&[0, 0]]), Err(ArrangementError::ZeroNormal(_))));
    let merged = Arrangement::central(2, &[&[1, 1], &[2, 2]]).unwrap();
    assert_eq!(merged.len(), 1);
    assert_eq!(merged.warnings().len(), 1);
    assert!(matches!(enumerate_faces(&Arrangement::boolean(3), 20), Err(ArrangementError::FaceBudgetExceeded { budget: 20 })));
}

#[test]
fn json_round_trip() {
    for (_, arr) in central_arrangements().into_iter().chain(affine_arrangements()) {
        let back = Arrangement::from_json(&arr.to_json()).unwrap();
        assert_eq!(poset(&back).faces(), poset(&arr).faces());
    }
    let text = r#"{"dim": 2, "hyperplanes": [{"normal": ["1", "1/2"]}, {"normal": [0, 1], "offset": "0"}]}"#;
    assert_eq!(poset(&Arrangement::from_json(text).unwrap()).len(), 9);
}

fn alternating_sum(p: &FacePoset) -> i64 {
    p.ids().map(|f| if p.dim(f) % 2 == 0 { 1 } else { -1 }).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The faces are open cells decomposing `R^n`, so their signed count is `χ_c(R^n)`.
    #[test]
    fn faces_decompose_space(arr in prop_oneof![arb_central(), arb_affine()]) {
        let p = poset(&arr);
        let n = arr.dim() as u32;
        prop_assert_eq!(alternating_sum(&p), (-1i64).pow(n));
        for f in p.ids() {
            prop_assert_eq!(p.dim(f), arr.dim() - arr.rank_of(&p.zero_set(f)));
            let w = &p.face(f).witness;
            for (h, s) in arr.hyperplanes().iter().zip(p.signs(f)) {
                prop_assert_eq!(matrix_diagrams::Sign::of(&h.eval(w)), *s);
            }
        }
    }

    #[test]
    fn tits_is_associative_and_agrees_with_oracle(arr in arb_central(), seed in any::<u64>()) {
        let p = poset(&arr);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| p.ids().nth(rng.gen_range(0..p.len())).unwrap();
        for _ in 0..20 {
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let t = |x, y| tits_product(&p, x, y).unwrap();
            prop_assert_eq!(t(t(c, b), a), t(c, t(b, a)));
            prop_assert_eq!(t(b, a), tits_by_perturbation(&arr, &p, b, a));
            prop_assert_eq!(t(b, b), b);
        }
    }
}
