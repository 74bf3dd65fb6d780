use proptest::prelude::*;

use matrix_diagrams::arrangement::{Arrangement, DEFAULT_FACE_BUDGET};
use matrix_diagrams::cousin::perversity_report;
use matrix_diagrams::dirac::{dirac_preimage, lift_dirac_morphism, to_dirac, to_dirac_morphism, validate_dirac, DiracDiagram, DiracMorphism, PhiPsi};
use matrix_diagrams::{validate, FieldSpec, Matrix, MatrixDiagram, Strata};

const Q: FieldSpec = FieldSpec::Rationals;

fn line() -> Strata {
    Strata::new(Arrangement::boolean(1), DEFAULT_FACE_BUDGET).unwrap()
}

fn mat(rows: usize, cols: usize, e: &[i64]) -> Matrix {
    Matrix::from_i64(rows, cols, e)
}

#[test]
fn identity_diagram_passes() {
    let i = Matrix::identity(2);
    let dd = DiracDiagram::new(Q, i.clone(), i.clone(), i.clone(), i).unwrap();
    assert!(validate_dirac(&dd).unwrap().passes());
}

#[test]
fn singular_cross_term_is_named() {
    // γ_+ δ_- = 0
    let dd = DiracDiagram::new(Q, mat(2, 1, &[1, 0]), mat(2, 1, &[0, 1]), mat(1, 2, &[1, 0]), mat(1, 2, &[0, 1])).unwrap();
    let r = validate_dirac(&dd).unwrap();
    assert!(r.failures.contains(&"gamma_plus delta_minus invertible".to_string()));
    assert!(r.failures.contains(&"gamma_minus delta_plus invertible".to_string()));
    assert_eq!(r.failures.len(), 2);
    assert!(dirac_preimage(&line(), &dd).is_err());
}

#[test]
fn center_only_passes() {
    let dd = DiracDiagram::new(Q, Matrix::zeros(3, 0), Matrix::zeros(3, 0), Matrix::zeros(0, 3), Matrix::zeros(0, 3)).unwrap();
    assert!(validate_dirac(&dd).unwrap().passes());
    let s = line();
    let d = dirac_preimage(&s, &dd).unwrap();
    let zero = s.real().parse("0").unwrap();
    assert_eq!(d.dim(zero, zero), 3);
    assert_eq!(d.total_dim(), 3);
}

#[test]
fn shape_mismatch_is_an_error() {
    assert!(DiracDiagram::new(Q, mat(2, 1, &[1, 0]), mat(1, 1, &[1]), mat(1, 2, &[1, 0]), mat(1, 2, &[0, 1])).is_err());
}

#[test]
fn wrong_arrangement_is_an_error() {
    let s = Strata::new(Arrangement::boolean(2), DEFAULT_FACE_BUDGET).unwrap();
    assert!(to_dirac(&s, &MatrixDiagram::constant(&s, Q)).is_err());
}

#[test]
fn phi_psi_validation() {
    let ok = PhiPsi { field: Q, a: mat(1, 1, &[2]), b: mat(1, 1, &[1]) };
    assert!(ok.failures().unwrap().is_empty());
    let bad = PhiPsi { field: Q, a: mat(1, 1, &[1]), b: mat(1, 1, &[1]) };
    assert_eq!(bad.failures().unwrap(), vec!["Id - ab invertible".to_string()]);
    let f2 = PhiPsi { field: FieldSpec::prime(2).unwrap(), a: mat(1, 1, &[3]), b: mat(1, 1, &[1]) };
    assert!(!f2.failures().unwrap().is_empty());
    assert!(PhiPsi { field: Q, a: mat(1, 2, &[1, 0]), b: mat(1, 2, &[1, 0]) }.failures().is_err());
}

/// `δ = P[I;0]` and `γ = [I X]P⁻¹` always satisfy `γδ = Id`.
fn split_pair(p: &Matrix, x: &Matrix, k: usize) -> (Matrix, Matrix) {
    let m = p.rows();
    let mut top = Matrix::zeros(m, k);
    top.put_block(0, 0, &Matrix::identity(k));
    let mut left = Matrix::zeros(k, m);
    left.put_block(0, 0, &Matrix::identity(k));
    left.put_block(0, k, x);
    let pinv = Q.inverse(p).unwrap();
    (Q.mul(p, &top).unwrap(), Q.mul(&left, &pinv).unwrap())
}

fn arb_invertible(m: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, m * m).prop_map(move |e| Matrix::from_i64(m, m, &e)).prop_filter("invertible", |p| Q.is_invertible(p))
}

fn arb_dirac() -> impl Strategy<Value = DiracDiagram> {
    (0usize..=2, 0usize..=2)
        .prop_flat_map(|(k, extra)| {
            let m = k + extra;
            (
                Just(k),
                arb_invertible(m),
                arb_invertible(m),
                prop::collection::vec(-2i64..=2, k * extra),
                prop::collection::vec(-2i64..=2, k * extra),
            )
        })
        .prop_filter_map("cross terms invertible", |(k, p, q, x, y)| {
            let extra = p.rows() - k;
            let (dm, gm) = split_pair(&p, &Matrix::from_i64(k, extra, &x), k);
            let (dp, gp) = split_pair(&q, &Matrix::from_i64(k, extra, &y), k);
            let dd = DiracDiagram::new(Q, dm, dp, gm, gp).ok()?;
            validate_dirac(&dd).ok()?.passes().then_some(dd)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn preimage_is_perverse_and_round_trips(dd in arb_dirac()) {
        let s = line();
        let d = dirac_preimage(&s, &dd).unwrap();
        prop_assert!(validate(&s, &d).unwrap().passes());
        prop_assert!(perversity_report(&s, &d).unwrap().verdicts.perverse);
        prop_assert_eq!(to_dirac(&s, &d).unwrap(), dd);
    }

    /// Changing basis in the middle lifts to a morphism of diagrams.
    #[test]
    fn basis_change_lifts(dd in arb_dirac()) {
        let m = dd.e_zero;
        // a fixed unipotent change of basis
        let mut u = Matrix::identity(m);
        if m >= 2 {
            u.set(0, 1, Q.from_i64(3));
        }
        let uinv = Q.inverse(&u).unwrap();
        let moved = DiracDiagram::new(
            Q,
            Q.mul(&u, &dd.delta_minus).unwrap(),
            Q.mul(&u, &dd.delta_plus).unwrap(),
            Q.mul(&dd.gamma_minus, &uinv).unwrap(),
            Q.mul(&dd.gamma_plus, &uinv).unwrap(),
        ).unwrap();
        let f = DiracMorphism { f_minus: Matrix::identity(dd.e_minus), f_zero: u, f_plus: Matrix::identity(dd.e_plus) };
        prop_assert!(f.failures(&dd, &moved).unwrap().is_empty());
        let s = line();
        let (src, tgt) = (dirac_preimage(&s, &dd).unwrap(), dirac_preimage(&s, &moved).unwrap());
        let lifted = lift_dirac_morphism(&s, &f, &src, &tgt).unwrap();
        prop_assert!(lifted.failures(&s, &src, &tgt).unwrap().is_empty());
        prop_assert_eq!(to_dirac_morphism(&s, &lifted).unwrap(), f);
    }
}
