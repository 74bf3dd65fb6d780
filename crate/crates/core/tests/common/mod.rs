//! Test arrangements and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use matrix_diagrams::arrangement::{Arrangement, FaceId, FacePoset, Hyperplane, Mode, Sign};
use matrix_diagrams::{FieldSpec, MatrixDiagram, Matrix, Strata};

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The central arrangements the exhaustive checks run on.
pub fn central_arrangements() -> Vec<(&'static str, Arrangement)> {
    vec![
        ("line", Arrangement::boolean(1)),
        ("boolean-2", Arrangement::boolean(2)),
        ("three-lines", Arrangement::concurrent_lines(3)),
        ("boolean-3", Arrangement::boolean(3)),
        ("braid-3", Arrangement::central(3, &[&[1, -1, 0], &[0, 1, -1], &[1, 0, -1]]).unwrap()),
        ("one-plane-in-r2", Arrangement::central(2, &[&[1, 1]]).unwrap()),
    ]
}

pub fn affine_arrangements() -> Vec<(&'static str, Arrangement)> {
    vec![
        ("points-0-1", Arrangement::points_on_line(&[0, 1])),
        ("points-0-1-3", Arrangement::points_on_line(&[-1, 0, 3])),
        (
            "triangle",
            Arrangement::new(2, vec![Hyperplane::affine(&[1, 0], q(0)), Hyperplane::affine(&[0, 1], q(0)), Hyperplane::affine(&[1, 1], q(1))], Mode::Affine)
                .unwrap(),
        ),
    ]
}

/// `B∘A` read off the point `(1-ε)b + εa` for interior points `b ∈ B`, `a ∈ A` and `ε` small
/// enough that no nonzero sign at `b` can flip.
pub fn tits_by_perturbation(arr: &Arrangement, poset: &FacePoset, b: FaceId, a: FaceId) -> FaceId {
    let (wb, wa) = (&poset.face(b).witness, &poset.face(a).witness);
    let mut eps = BigRational::one() / q(2);
    for h in arr.hyperplanes() {
        let (vb, va) = (h.eval(wb), h.eval(wa));
        if !vb.is_zero() {
            let bound = vb.abs() / (vb.abs() + va.abs());
            if bound < eps {
                eps = bound;
            }
        }
    }
    eps /= q(2);
    let p: Vec<BigRational> = wb.iter().zip(wa).map(|(x, y)| (BigRational::one() - &eps) * x + &eps * y).collect();
    let signs: Vec<Sign> = arr.hyperplanes().iter().map(|h| Sign::of(&h.eval(&p))).collect();
    poset.find(&signs).expect("the perturbed point lies in some face")
}

fn build(n: usize, normals: Vec<Vec<i64>>, offsets: Option<Vec<i64>>) -> Option<Arrangement> {
    let hs = normals
        .iter()
        .enumerate()
        .map(|(i, v)| match &offsets {
            Some(o) => Hyperplane::affine(v, q(o[i])),
            None => Hyperplane::linear(v),
        })
        .collect();
    let mode = if offsets.is_some() { Mode::Affine } else { Mode::Central };
    Arrangement::new(n, hs, mode).ok()
}

/// A random central arrangement with small integer normals; `None` when two of them coincide.
pub fn random_central(rng: &mut impl Rng, n: usize, m: usize) -> Option<Arrangement> {
    let normals = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    build(n, normals, None)
}

pub fn arb_central() -> impl Strategy<Value = Arrangement> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=4)))
        .prop_filter_map("distinct nonzero normals", |(n, normals)| build(n, normals, None))
}

pub fn arb_affine() -> impl Strategy<Value = Arrangement> {
    (1usize..=2)
        .prop_flat_map(|n| {
            (Just(n), prop::collection::vec((prop::collection::vec(-2i64..=2, n), -2i64..=2), 1..=4))
        })
        .prop_filter_map("distinct nonzero hyperplanes", |(n, hs)| {
            let (normals, offsets): (Vec<_>, Vec<_>) = hs.into_iter().unzip();
            build(n, normals, Some(offsets))
        })
}

fn sub_rng(seed: u64, parts: &[usize]) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut s = seed;
    for &p in parts {
        s = s.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(p as u64 + 1);
    }
    rand_chacha::ChaCha8Rng::seed_from_u64(s)
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-2..=2)).collect();
    Matrix::from_i64(rows, cols, &entries)
}

/// Random dimensions up to `max_dim` and random maps; usually not a matrix diagram.
pub fn random_diagram(s: &Strata, field: FieldSpec, seed: u64, max_dim: usize) -> MatrixDiagram {
    let dim = |a: FaceId, b: FaceId| sub_rng(seed, &[0, a.0, b.0]).gen_range(0..=max_dim);
    MatrixDiagram::from_fn(
        s,
        field,
        dim,
        |a, b1, b2| random_matrix(&mut sub_rng(seed, &[1, a.0, b1.0, b2.0]), dim(a, b2), dim(a, b1)),
        |a2, a1, b| random_matrix(&mut sub_rng(seed, &[2, a2.0, a1.0, b.0]), dim(a1, b), dim(a2, b)),
    )
    .unwrap()
}

/// Random dimensions and zero maps: every square commutes, few maps are invertible.
pub fn zero_map_diagram(s: &Strata, field: FieldSpec, seed: u64, max_dim: usize) -> MatrixDiagram {
    let dim = |a: FaceId, b: FaceId| sub_rng(seed, &[0, a.0, b.0]).gen_range(0..=max_dim);
    MatrixDiagram::from_fn(s, field, dim, |a, b1, b2| Matrix::zeros(dim(a, b2), dim(a, b1)), |a2, a1, b| Matrix::zeros(dim(a1, b), dim(a2, b))).unwrap()
}
