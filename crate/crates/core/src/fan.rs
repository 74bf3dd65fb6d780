//! Orientation signs and cellular sheaves on the real face decomposition.
//!
//! Each face `A` gets an ordered basis of the linear space parallel to it: the reduced-echelon
//! kernel basis of the normals of the hyperplanes containing `A`. Faces with the same span
//! therefore share a basis. The incidence sign `ψ(A1 ⋖ A2)` compares the orientation of `A2`
//! with the one induced on its facet `A1` by the outward direction, so that the signs define
//! the cellular cochain differential.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arrangement::{Arrangement, FaceId, FacePoset};
use crate::linalg::{ChainComplex, Cohomology, FieldSpec, LinalgError, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("stalk dimensions given for {found} faces, poset has {expected}")]
    WrongFaceCount { expected: usize, found: usize },
    #[error("map {from} -> {to} is not a cover relation")]
    NotACover { from: String, to: String },
    #[error("map {from} -> {to} has shape {found:?}, expected {expected:?}")]
    Shape { from: String, to: String, expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ordered bases of face spans and the incidence signs between covering faces.
#[derive(Clone, Debug)]
pub struct Orientation {
    bases: Vec<Matrix>,
    psi: HashMap<(FaceId, FaceId), i8>,
}

impl Orientation {
    /// `arr` must be the arrangement whose faces form `poset`.
    pub fn new(arr: &Arrangement, poset: &FacePoset) -> Self {
        let q = FieldSpec::Rationals;
        let n = arr.dim();
        let mut by_span: BTreeMap<Vec<usize>, Matrix> = BTreeMap::new();
        let bases: Vec<Matrix> = poset
            .ids()
            .map(|f| {
                let zeros = poset.zero_set(f);
                by_span
                    .entry(zeros.clone())
                    .or_insert_with(|| {
                        let rows: Vec<Vec<Scalar>> = zeros.iter().map(|&h| arr.hyperplanes()[h].normal.clone()).collect();
                        q.kernel_basis(&Matrix::from_rows(rows, n).expect("normals have ambient length"))
                    })
                    .clone()
            })
            .collect();
        let mut psi = HashMap::new();
        for (a1, a2) in poset.covers() {
            let w1 = &poset.face(a1).witness;
            let w2 = &poset.face(a2).witness;
            let b1 = &bases[a1.0];
            let b2 = &bases[a2.0];
            // columns: outward direction, then the basis of the facet
            let mut m = Matrix::zeros(n, b2.cols());
            for i in 0..n {
                m.set(i, 0, &w1[i] - &w2[i]);
                for j in 0..b1.cols() {
                    m.set(i, j + 1, b1.get(i, j).clone());
                }
            }
            let coords = q.solve(b2, &m).expect("facet directions lie in the span of the face");
            let det = q.determinant(&coords).expect("square coordinate matrix");
            debug_assert!(!det.is_zero(), "outward direction is transverse to the facet");
            psi.insert((a1, a2), if det.is_positive() { 1 } else { -1 });
        }
        Orientation { bases, psi }
    }

    /// Columns form the chosen ordered basis of the span of the face.
    pub fn basis(&self, f: FaceId) -> &Matrix {
        &self.bases[f.0]
    }

    /// Incidence sign of a cover relation. Panics on a non-cover.
    pub fn psi(&self, a1: FaceId, a2: FaceId) -> i8 {
        self.psi[&(a1, a2)]
    }

    pub fn try_psi(&self, a1: FaceId, a2: FaceId) -> Option<i8> {
        self.psi.get(&(a1, a2)).copied()
    }

    /// Length-2 intervals `A1 < A3` whose two signed paths fail to cancel.
    pub fn anticommutation_failures(&self, poset: &FacePoset) -> Vec<(FaceId, FaceId)> {
        let mut out = Vec::new();
        for a1 in poset.ids() {
            let mut tops: BTreeMap<FaceId, i32> = BTreeMap::new();
            for &a2 in poset.upper_covers(a1) {
                for &a3 in poset.upper_covers(a2) {
                    *tops.entry(a3).or_default() += (self.psi(a1, a2) * self.psi(a2, a3)) as i32;
                }
            }
            out.extend(tops.into_iter().filter(|(_, s)| *s != 0).map(|(a3, _)| (a1, a3)));
        }
        out
    }
}

/// A representation of the face poset: a stalk per face and a generalization map per cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSheaf {
    stalk_dims: Vec<usize>,
    maps: BTreeMap<(FaceId, FaceId), Matrix>,
}

impl FanSheaf {
    pub fn new(poset: &FacePoset, stalk_dims: Vec<usize>, maps: BTreeMap<(FaceId, FaceId), Matrix>) -> Result<Self, FanError> {
        if stalk_dims.len() != poset.len() {
            return Err(FanError::WrongFaceCount { expected: poset.len(), found: stalk_dims.len() });
        }
        for (&(a, b), m) in &maps {
            if !poset.is_cover(a, b) {
                return Err(FanError::NotACover { from: poset.label(a), to: poset.label(b) });
            }
            let expected = (stalk_dims[b.0], stalk_dims[a.0]);
            if m.shape() != expected {
                return Err(FanError::Shape { from: poset.label(a), to: poset.label(b), expected, found: m.shape() });
            }
        }
        Ok(FanSheaf { stalk_dims, maps })
    }

    /// `k` on every face with identity maps.
    pub fn constant(poset: &FacePoset) -> Self {
        let maps = poset.covers().into_iter().map(|c| (c, Matrix::identity(1))).collect();
        FanSheaf { stalk_dims: vec![1; poset.len()], maps }
    }

    /// `k` on the faces in the closure of `a`, identity maps among them, zero elsewhere.
    pub fn interval(poset: &FacePoset, a: FaceId) -> Self {
        let stalk_dims: Vec<usize> = poset.ids().map(|b| usize::from(poset.leq(b, a))).collect();
        let maps = poset
            .covers()
            .into_iter()
            .filter(|&(_, y)| poset.leq(y, a))
            .map(|c| (c, Matrix::identity(1)))
            .collect();
        FanSheaf { stalk_dims, maps }
    }

    /// `k` at `a` only.
    pub fn skyscraper(poset: &FacePoset, a: FaceId) -> Self {
        let stalk_dims = poset.ids().map(|b| usize::from(b == a)).collect();
        FanSheaf { stalk_dims, maps: BTreeMap::new() }
    }

    pub fn stalk_dim(&self, f: FaceId) -> usize {
        self.stalk_dims[f.0]
    }

    /// Generalization map along a cover; zero if not stored.
    pub fn map(&self, a: FaceId, b: FaceId) -> Matrix {
        self.maps.get(&(a, b)).cloned().unwrap_or_else(|| Matrix::zeros(self.stalk_dims[b.0], self.stalk_dims[a.0]))
    }

    /// Length-2 intervals `A1 < A3` where two paths through different middles disagree.
    pub fn square_failures(&self, poset: &FacePoset, field: FieldSpec) -> Vec<(FaceId, FaceId)> {
        let mut out = Vec::new();
        for a1 in poset.ids() {
            let mut seen: BTreeMap<FaceId, Matrix> = BTreeMap::new();
            let mut bad = Vec::new();
            for &a2 in poset.upper_covers(a1) {
                for &a3 in poset.upper_covers(a2) {
                    let path = field.mul(&self.map(a2, a3), &self.map(a1, a2)).expect("shapes validated");
                    match seen.get(&a3) {
                        Some(prev) if *prev != field.normalize_matrix(&path).expect("normalizable") => bad.push(a3),
                        Some(_) => {}
                        None => {
                            seen.insert(a3, field.normalize_matrix(&path).expect("normalizable"));
                        }
                    }
                }
            }
            bad.sort();
            bad.dedup();
            out.extend(bad.into_iter().map(|a3| (a1, a3)));
        }
        out
    }

    fn signed_complex(&self, poset: &FacePoset, orient: &Orientation, field: FieldSpec, faces: &[FaceId], degree: impl Fn(FaceId) -> i64) -> ChainComplex {
        let pos: HashMap<FaceId, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let summands: Vec<(i64, usize)> = faces.iter().map(|&f| (degree(f), self.stalk_dim(f))).collect();
        let (c, _) = ChainComplex::assemble(&summands, |i| {
            let a1 = faces[i];
            poset
                .upper_covers(a1)
                .iter()
                .filter_map(|a2| pos.get(a2).map(|&j| (j, field.signed(&self.map(a1, *a2), orient.psi(a1, *a2)))))
                .collect()
        })
        .expect("cover maps shift degree by one");
        c
    }

    /// The complex over the star of `d`: degree `dim A - dim D` holds the stalk at `A ≥ D`,
    /// with differential the generalization maps twisted by `ψ`.
    pub fn costalk_complex(&self, poset: &FacePoset, orient: &Orientation, d: FaceId, field: FieldSpec) -> ChainComplex {
        let star = poset.faces_above(d);
        let base = poset.dim(d) as i64;
        self.signed_complex(poset, orient, field, &star, |a| poset.dim(a) as i64 - base)
    }

    /// Cellular cochains with compact support: degree `dim A` holds the stalk at `A`.
    pub fn compact_complex(&self, poset: &FacePoset, orient: &Orientation, field: FieldSpec) -> ChainComplex {
        let all: Vec<FaceId> = poset.ids().collect();
        self.signed_complex(poset, orient, field, &all, |a| poset.dim(a) as i64)
    }

    pub fn compact_cohomology(&self, poset: &FacePoset, orient: &Orientation, field: FieldSpec) -> Result<Cohomology, LinalgError> {
        self.compact_complex(poset, orient, field).cohomology(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{enumerate_faces, DEFAULT_FACE_BUDGET};
    use crate::linalg::nonzero;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn setup(arr: &Arrangement) -> (FacePoset, Orientation) {
        let p = enumerate_faces(arr, DEFAULT_FACE_BUDGET).unwrap();
        let o = Orientation::new(arr, &p);
        (p, o)
    }

    #[test]
    fn line_incidences_have_opposite_signs() {
        let (p, o) = setup(&Arrangement::boolean(1));
        let f = |l: &str| p.parse(l).unwrap();
        assert_eq!(o.psi(f("0"), f("-")), -o.psi(f("0"), f("+")));
        let c = FanSheaf::constant(&p).compact_complex(&p, &o, Q);
        assert_eq!(Q.rank(&c.differential(0)), 1);
    }

    #[test]
    fn anticommutation_on_small_fans() {
        for arr in [Arrangement::boolean(2), Arrangement::boolean(3), Arrangement::concurrent_lines(3), Arrangement::points_on_line(&[0, 1])] {
            let (p, o) = setup(&arr);
            assert!(o.anticommutation_failures(&p).is_empty(), "{arr}");
        }
    }

    #[test]
    fn compact_cohomology_examples() {
        let (p, o) = setup(&Arrangement::boolean(1));
        assert_eq!(nonzero(&FanSheaf::constant(&p).compact_cohomology(&p, &o, Q).unwrap()), Cohomology::from([(1, 1)]));
        let zero = p.parse("0").unwrap();
        assert_eq!(nonzero(&FanSheaf::skyscraper(&p, zero).compact_cohomology(&p, &o, Q).unwrap()), Cohomology::from([(0, 1)]));
        let (p2, o2) = setup(&Arrangement::boolean(2));
        assert_eq!(nonzero(&FanSheaf::constant(&p2).compact_cohomology(&p2, &o2, Q).unwrap()), Cohomology::from([(2, 1)]));
    }

    #[test]
    fn costalks_on_the_line() {
        let (p, o) = setup(&Arrangement::boolean(1));
        let f = |l: &str| p.parse(l).unwrap();
        let closed = FanSheaf::interval(&p, f("+"));
        assert!(closed.costalk_complex(&p, &o, f("0"), Q).is_acyclic(Q).unwrap());
        assert_eq!(closed.costalk_complex(&p, &o, f("+"), Q).cohomology(Q).unwrap(), Cohomology::from([(0, 1)]));
        let constant = FanSheaf::constant(&p).costalk_complex(&p, &o, f("0"), Q);
        assert_eq!(nonzero(&constant.cohomology(Q).unwrap()), Cohomology::from([(1, 1)]));
    }

    #[test]
    fn square_failures_are_found() {
        let (p, _) = setup(&Arrangement::boolean(2));
        let f = |l: &str| p.parse(l).unwrap();
        let mut maps: BTreeMap<(FaceId, FaceId), Matrix> = p.covers().into_iter().map(|c| (c, Matrix::identity(1))).collect();
        maps.insert((f("00"), f("0+")), Matrix::scalar(2));
        let g = FanSheaf::new(&p, vec![1; 9], maps).unwrap();
        let fails = g.square_failures(&p, Q);
        assert!(fails.contains(&(f("00"), f("++"))));
        assert!(FanSheaf::constant(&p).square_failures(&p, Q).is_empty());
        assert!(FanSheaf::new(&p, vec![1; 9], BTreeMap::from([((f("00"), f("++")), Matrix::identity(1))])).is_err());
    }
}
