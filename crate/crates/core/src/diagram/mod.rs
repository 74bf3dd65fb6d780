//! Matrix diagrams: a space `E_{A,B}` for every imaginary face `A` and real face `B`, a map
//! `∂′_{A|B1,B2}: E_{A,B1} -> E_{A,B2}` for every real cover `B1 ⋖ B2`, and a map
//! `∂″_{A2,A1|B}: E_{A2,B} -> E_{A1,B}` for every imaginary cover `A1 ⋖ A2`.
//!
//! Maps are stored for cover relations only. Missing maps are zero.

mod dual;
mod extract;
mod io;
mod morphism;
mod product;
mod validate;

pub use extract::{extract_single_indexed, SingleIndexed};
pub use io::{DiagramFile, LoadOptions, MatrixFile};
pub use morphism::{DiagramMorphism, MorphismFailure};
pub use product::{external_product, external_product_morphism};
pub use validate::{required_isos, validate, validate_affine, IsoFailure, SquareFailure, SquareKind, ValidationReport};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arrangement::FaceId;
use crate::linalg::{FieldSpec, LinalgError, Matrix};
use crate::strata::Strata;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram does not match the arrangement: {0}")]
    WrongSize(String),
    #[error("{} map(s) have the wrong shape: {}", .0.len(), .0.join("; "))]
    Shape(Vec<String>),
    #[error("unknown face key(s): {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("{0} is not a cover relation")]
    NotACover(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operation requires a central arrangement")]
    NotCentral,
    #[error("operation requires an affine arrangement")]
    NotAffine,
    #[error("the arrangement has no zero face")]
    MissingZeroFace,
    #[error("diagrams are over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal defect: {0}")]
    Internal(String),
}

/// `(A, B1, B2)` for `∂′_{A|B1,B2}`.
pub type PrimeKey = (FaceId, FaceId, FaceId);
/// `(A2, A1, B)` for `∂″_{A2,A1|B}`.
pub type SecondKey = (FaceId, FaceId, FaceId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDiagram {
    field: FieldSpec,
    imag_len: usize,
    real_len: usize,
    dims: Vec<usize>,
    dprime: BTreeMap<PrimeKey, Matrix>,
    dsecond: BTreeMap<SecondKey, Matrix>,
}

impl MatrixDiagram {
    /// Checks that every map sits on a cover with the right shape, fills missing maps with
    /// zeros and reduces entries into the field.
    pub fn from_parts(
        strata: &Strata,
        field: FieldSpec,
        dims: BTreeMap<(FaceId, FaceId), usize>,
        dprime: BTreeMap<PrimeKey, Matrix>,
        dsecond: BTreeMap<SecondKey, Matrix>,
    ) -> Result<Self, DiagramError> {
        let (imag, real) = (strata.imag(), strata.real());
        let mut dim_vec = vec![0; imag.len() * real.len()];
        for (&(a, b), &d) in &dims {
            if a.0 >= imag.len() || b.0 >= real.len() {
                return Err(DiagramError::WrongSize(format!("face pair ({a}, {b}) out of range")));
            }
            dim_vec[a.0 * real.len() + b.0] = d;
        }
        for &(a, b1, b2) in dprime.keys() {
            if a.0 >= imag.len() || !real.is_cover(b1, b2) {
                return Err(DiagramError::NotACover(format!("dprime {}|{}->{}", imag.label(a), real.label(b1), real.label(b2))));
            }
        }
        for &(a2, a1, b) in dsecond.keys() {
            if b.0 >= real.len() || !imag.is_cover(a1, a2) {
                return Err(DiagramError::NotACover(format!("dsecond {}->{}|{}", imag.label(a2), imag.label(a1), real.label(b))));
            }
        }
        let dim = |a: FaceId, b: FaceId| dim_vec[a.0 * real.len() + b.0];
        let mut shape_errors = Vec::new();
        let mut full_prime = BTreeMap::new();
        for a in imag.ids() {
            for (b1, b2) in real.covers() {
                let expected = (dim(a, b2), dim(a, b1));
                let m = dprime.get(&(a, b1, b2)).cloned().unwrap_or_else(|| Matrix::zeros(expected.0, expected.1));
                if m.shape() != expected {
                    shape_errors.push(format!(
                        "dprime {}|{}->{} is {}x{}, expected {}x{}",
                        imag.label(a),
                        real.label(b1),
                        real.label(b2),
                        m.rows(),
                        m.cols(),
                        expected.0,
                        expected.1
                    ));
                    continue;
                }
                full_prime.insert((a, b1, b2), field.normalize_matrix(&m)?);
            }
        }
        let mut full_second = BTreeMap::new();
        for b in real.ids() {
            for (a1, a2) in imag.covers() {
                let expected = (dim(a1, b), dim(a2, b));
                let m = dsecond.get(&(a2, a1, b)).cloned().unwrap_or_else(|| Matrix::zeros(expected.0, expected.1));
                if m.shape() != expected {
                    shape_errors.push(format!(
                        "dsecond {}->{}|{} is {}x{}, expected {}x{}",
                        imag.label(a2),
                        imag.label(a1),
                        real.label(b),
                        m.rows(),
                        m.cols(),
                        expected.0,
                        expected.1
                    ));
                    continue;
                }
                full_second.insert((a2, a1, b), field.normalize_matrix(&m)?);
            }
        }
        if !shape_errors.is_empty() {
            return Err(DiagramError::Shape(shape_errors));
        }
        Ok(MatrixDiagram {
            field,
            imag_len: imag.len(),
            real_len: real.len(),
            dims: dim_vec,
            dprime: full_prime,
            dsecond: full_second,
        })
    }

    /// Builds a diagram from closures; `prime(A, B1, B2)` and `second(A2, A1, B)` are only
    /// called on covers.
    pub fn from_fn(
        strata: &Strata,
        field: FieldSpec,
        dim: impl Fn(FaceId, FaceId) -> usize,
        prime: impl Fn(FaceId, FaceId, FaceId) -> Matrix,
        second: impl Fn(FaceId, FaceId, FaceId) -> Matrix,
    ) -> Result<Self, DiagramError> {
        let (imag, real) = (strata.imag(), strata.real());
        let dims = imag.ids().flat_map(|a| real.ids().map(move |b| (a, b))).map(|(a, b)| ((a, b), dim(a, b))).collect();
        let mut dprime = BTreeMap::new();
        for a in imag.ids() {
            for (b1, b2) in real.covers() {
                dprime.insert((a, b1, b2), prime(a, b1, b2));
            }
        }
        let mut dsecond = BTreeMap::new();
        for b in real.ids() {
            for (a1, a2) in imag.covers() {
                dsecond.insert((a2, a1, b), second(a2, a1, b));
            }
        }
        MatrixDiagram::from_parts(strata, field, dims, dprime, dsecond)
    }

    /// All spaces zero.
    pub fn zero(strata: &Strata, field: FieldSpec) -> Self {
        MatrixDiagram::from_parts(strata, field, BTreeMap::new(), BTreeMap::new(), BTreeMap::new()).expect("zero diagram is well formed")
    }

    /// `k` everywhere with identity maps.
    pub fn constant(strata: &Strata, field: FieldSpec) -> Self {
        let id = |_, _, _| Matrix::identity(1);
        MatrixDiagram::from_fn(strata, field, |_, _| 1, id, id).expect("constant diagram is well formed")
    }

    /// `k` at the single pair `(a, b)`, zero elsewhere.
    pub fn point(strata: &Strata, field: FieldSpec, a: FaceId, b: FaceId) -> Self {
        let dims = BTreeMap::from([((a, b), 1)]);
        MatrixDiagram::from_parts(strata, field, dims, BTreeMap::new(), BTreeMap::new()).expect("point diagram is well formed")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn imag_len(&self) -> usize {
        self.imag_len
    }

    pub fn real_len(&self) -> usize {
        self.real_len
    }

    /// Whether the diagram is indexed by the faces of `strata`.
    pub fn fits(&self, strata: &Strata) -> bool {
        self.imag_len == strata.imag().len() && self.real_len == strata.real().len()
    }

    pub fn dim(&self, a: FaceId, b: FaceId) -> usize {
        self.dims[a.0 * self.real_len + b.0]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `∂′_{A|B1,B2}`; panics if `B1 ⋖ B2` is not a cover.
    pub fn dprime(&self, a: FaceId, b1: FaceId, b2: FaceId) -> &Matrix {
        &self.dprime[&(a, b1, b2)]
    }

    /// `∂″_{A2,A1|B}`; panics if `A1 ⋖ A2` is not a cover.
    pub fn dsecond(&self, a2: FaceId, a1: FaceId, b: FaceId) -> &Matrix {
        &self.dsecond[&(a2, a1, b)]
    }

    pub fn dprime_maps(&self) -> &BTreeMap<PrimeKey, Matrix> {
        &self.dprime
    }

    pub fn dsecond_maps(&self) -> &BTreeMap<SecondKey, Matrix> {
        &self.dsecond
    }

    /// Replaces one `∂′` map, keeping the shape.
    pub fn set_dprime(&mut self, key: PrimeKey, m: Matrix) -> Result<(), DiagramError> {
        let old = self.dprime.get_mut(&key).ok_or_else(|| DiagramError::NotACover(format!("{key:?}")))?;
        if old.shape() != m.shape() {
            return Err(DiagramError::Shape(vec![format!("replacement for {key:?} is {:?}, expected {:?}", m.shape(), old.shape())]));
        }
        *old = self.field.normalize_matrix(&m)?;
        Ok(())
    }

    /// Replaces one `∂″` map, keeping the shape.
    pub fn set_dsecond(&mut self, key: SecondKey, m: Matrix) -> Result<(), DiagramError> {
        let old = self.dsecond.get_mut(&key).ok_or_else(|| DiagramError::NotACover(format!("{key:?}")))?;
        if old.shape() != m.shape() {
            return Err(DiagramError::Shape(vec![format!("replacement for {key:?} is {:?}, expected {:?}", m.shape(), old.shape())]));
        }
        *old = self.field.normalize_matrix(&m)?;
        Ok(())
    }

    /// Pointwise direct sum.
    pub fn direct_sum(&self, other: &MatrixDiagram) -> Result<MatrixDiagram, DiagramError> {
        if self.field != other.field {
            return Err(DiagramError::FieldMismatch);
        }
        if self.imag_len != other.imag_len || self.real_len != other.real_len {
            return Err(DiagramError::WrongSize("direct sum of diagrams over different arrangements".into()));
        }
        let block = |x: &Matrix, y: &Matrix| {
            let mut m = Matrix::zeros(x.rows() + y.rows(), x.cols() + y.cols());
            m.put_block(0, 0, x);
            m.put_block(x.rows(), x.cols(), y);
            m
        };
        Ok(MatrixDiagram {
            field: self.field,
            imag_len: self.imag_len,
            real_len: self.real_len,
            dims: self.dims.iter().zip(&other.dims).map(|(x, y)| x + y).collect(),
            dprime: self.dprime.iter().map(|(k, m)| (*k, block(m, &other.dprime[k]))).collect(),
            dsecond: self.dsecond.iter().map(|(k, m)| (*k, block(m, &other.dsecond[k]))).collect(),
        })
    }

    /// Composite of `∂′` along a chain of real covers `b_0 ⋖ b_1 ⋖ ... ⋖ b_k` at fixed `a`.
    pub fn dprime_chain(&self, a: FaceId, chain: &[FaceId]) -> Matrix {
        let mut m = Matrix::identity(self.dim(a, chain[0]));
        for w in chain.windows(2) {
            m = self.field.mul(self.dprime(a, w[0], w[1]), &m).expect("cover maps compose");
        }
        m
    }

    /// Composite of `∂″` down a chain of imaginary covers `a_0 ⋗ a_1 ⋗ ... ⋗ a_k` at fixed `b`.
    pub fn dsecond_chain(&self, chain: &[FaceId], b: FaceId) -> Matrix {
        let mut m = Matrix::identity(self.dim(chain[0], b));
        for w in chain.windows(2) {
            m = self.field.mul(self.dsecond(w[0], w[1], b), &m).expect("cover maps compose");
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{Arrangement, DEFAULT_FACE_BUDGET};

    fn line() -> Strata {
        Strata::new(Arrangement::boolean(1), DEFAULT_FACE_BUDGET).unwrap()
    }

    #[test]
    fn missing_maps_are_zero() {
        let s = line();
        let zero = s.real().parse("0").unwrap();
        let d = MatrixDiagram::point(&s, FieldSpec::Rationals, zero, zero);
        assert_eq!(d.total_dim(), 1);
        let plus = s.real().parse("+").unwrap();
        assert_eq!(d.dprime(zero, zero, plus).shape(), (0, 1));
        assert_eq!(d.dsecond(plus, zero, zero).shape(), (1, 0));
    }

    #[test]
    fn shape_errors_are_collected() {
        let s = line();
        let f = |l: &str| s.real().parse(l).unwrap();
        let dims = BTreeMap::from([((f("0"), f("0")), 1)]);
        let dprime = BTreeMap::from([((f("0"), f("0"), f("+")), Matrix::identity(1))]);
        let dsecond = BTreeMap::from([((f("+"), f("0"), f("0")), Matrix::identity(1))]);
        match MatrixDiagram::from_parts(&s, FieldSpec::Rationals, dims, dprime, dsecond) {
            Err(DiagramError::Shape(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
        let bad = BTreeMap::from([((f("0"), f("-"), f("+")), Matrix::identity(1))]);
        assert!(matches!(
            MatrixDiagram::from_parts(&s, FieldSpec::Rationals, BTreeMap::new(), bad, BTreeMap::new()),
            Err(DiagramError::NotACover(_))
        ));
    }

    #[test]
    fn entries_are_reduced_mod_p() {
        let s = line();
        let f = |l: &str| s.real().parse(l).unwrap();
        let field = FieldSpec::prime(3).unwrap();
        let d = MatrixDiagram::from_fn(&s, field, |_, _| 1, |_, _, _| Matrix::scalar(4), |_, _, _| Matrix::scalar(-1)).unwrap();
        assert_eq!(d.dprime(f("0"), f("0"), f("+")), &Matrix::scalar(1));
        assert_eq!(d.dsecond(f("+"), f("0"), f("0")), &Matrix::scalar(2));
    }

    #[test]
    fn direct_sum_adds_dimensions() {
        let s = line();
        let c = MatrixDiagram::constant(&s, FieldSpec::Rationals);
        let sum = c.direct_sum(&c).unwrap();
        assert_eq!(sum.total_dim(), 18);
        let f = |l: &str| s.real().parse(l).unwrap();
        assert_eq!(sum.dprime(f("+"), f("0"), f("-")), &Matrix::identity(2));
    }
}
