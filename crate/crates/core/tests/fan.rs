mod common;

use proptest::prelude::*;

use common::*;
use matrix_diagrams::arrangement::{enumerate_faces, Arrangement, FacePoset, DEFAULT_FACE_BUDGET};
use matrix_diagrams::fan::{FanSheaf, Orientation};
use matrix_diagrams::linalg::{nonzero, Cohomology};
use matrix_diagrams::FieldSpec;

const Q: FieldSpec = FieldSpec::Rationals;

fn setup(arr: &Arrangement) -> (FacePoset, Orientation) {
    let p = enumerate_faces(arr, DEFAULT_FACE_BUDGET).unwrap();
    let o = Orientation::new(arr, &p);
    (p, o)
}

#[test]
fn orientation_signs_anticommute() {
    for (name, arr) in central_arrangements().into_iter().chain(affine_arrangements()) {
        let (p, o) = setup(&arr);
        assert!(o.anticommutation_failures(&p).is_empty(), "{name}");
    }
}

#[test]
fn constant_sheaf_has_compact_cohomology_of_space() {
    for (_, arr) in central_arrangements().into_iter().chain(affine_arrangements()) {
        let (p, o) = setup(&arr);
        let c = FanSheaf::constant(&p).compact_complex(&p, &o, Q);
        assert_eq!(c.d_squared_defect(Q), None);
        assert_eq!(nonzero(&c.cohomology(Q).unwrap()), Cohomology::from([(arr.dim() as i64, 1)]));
    }
}

/// `k` on the closure of an open face has no local cohomology at a smaller face, and `k` in
/// degree 0 at the face itself.
fn check_costalks(p: &FacePoset, o: &Orientation, field: FieldSpec) {
    for a in p.ids() {
        let sheaf = FanSheaf::interval(p, a);
        for d in p.ids() {
            let h = nonzero(&sheaf.costalk_complex(p, o, d, field).cohomology(field).unwrap());
            if d == a {
                assert_eq!(h, Cohomology::from([(0, 1)]));
            } else {
                assert!(h.is_empty(), "A = {}, D = {}: {h:?}", p.label(a), p.label(d));
            }
        }
    }
}

#[test]
fn costalks_of_closed_faces() {
    for arr in [Arrangement::boolean(1), Arrangement::boolean(2), Arrangement::concurrent_lines(3)] {
        let (p, o) = setup(&arr);
        check_costalks(&p, &o, Q);
        check_costalks(&p, &o, FieldSpec::prime(2).unwrap());
    }
}

#[test]
fn skyscraper_compact_cohomology() {
    let (p, o) = setup(&Arrangement::boolean(2));
    for a in p.ids() {
        let h = nonzero(&FanSheaf::skyscraper(&p, a).compact_cohomology(&p, &o, Q).unwrap());
        assert_eq!(h, Cohomology::from([(p.dim(a) as i64, 1)]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_fans(arr in prop_oneof![arb_central(), arb_affine()]) {
        let (p, o) = setup(&arr);
        prop_assert!(o.anticommutation_failures(&p).is_empty());
        let h = nonzero(&FanSheaf::constant(&p).compact_cohomology(&p, &o, Q).unwrap());
        prop_assert_eq!(h, Cohomology::from([(arr.dim() as i64, 1)]));
    }
}
