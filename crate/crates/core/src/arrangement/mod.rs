//! Real hyperplane arrangements, their faces and flats.
//!
//! Faces are encoded as sign vectors in hyperplane order. The canonical textual identity of a
//! face is its sign string, e.g. `"+0-"`.

mod faces;
mod flats;
mod io;

pub use faces::{enumerate_faces, hyperplanes_containing, tits_product, Face, FaceId, FacePoset, DEFAULT_FACE_BUDGET};
pub use flats::{flats, Flat};
pub use io::{ArrangementFile, Coefficient, HyperplaneFile};

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{FieldSpec, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("hyperplane {0} has a zero normal vector")]
    ZeroNormal(usize),
    #[error("hyperplane {index} has {found} coordinates, expected {expected}")]
    WrongLength { index: usize, expected: usize, found: usize },
    #[error("hyperplane {0} has a nonzero offset in a central arrangement")]
    NonzeroOffset(usize),
    #[error("hyperplane {second} duplicates hyperplane {first}")]
    DuplicateHyperplane { first: usize, second: usize },
    #[error("face count exceeds the budget of {budget}")]
    FaceBudgetExceeded { budget: usize },
    #[error("internal defect: {0}")]
    Internal(String),
    #[error("operation requires a central arrangement")]
    NotCentral,
    #[error("unknown face {0:?}")]
    UnknownFace(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Sign of an affine function on a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Scalar) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' | '\u{2212}' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

pub fn sign_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.as_char()).collect()
}

pub fn parse_signs(s: &str) -> Result<Vec<Sign>, ArrangementError> {
    s.chars()
        .map(|c| Sign::from_char(c).ok_or_else(|| ArrangementError::UnknownFace(s.to_string())))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Central,
    Affine,
}

/// The hyperplane `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Self {
        Hyperplane { normal, offset }
    }

    pub fn linear(normal: &[i64]) -> Self {
        Hyperplane { normal: normal.iter().map(|&v| int(v)).collect(), offset: Scalar::zero() }
    }

    pub fn affine(normal: &[i64], offset: Scalar) -> Self {
        Hyperplane { normal: normal.iter().map(|&v| int(v)).collect(), offset }
    }

    /// `normal · x - offset`; its sign is the face coordinate.
    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<Scalar>() - &self.offset
    }

    /// `Some(λ)` with `self = λ·other` on `(normal, offset)`, i.e. the same zero set.
    fn ratio_to(&self, other: &Hyperplane) -> Option<Scalar> {
        proportional(&self.normal, &other.normal).filter(|l| &other.offset * l == self.offset)
    }
}

pub(crate) fn int(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}

/// `Some(λ)` with `a = λ·b`, for nonzero vectors.
pub(crate) fn proportional(a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let k = b.iter().position(|x| !x.is_zero())?;
    let lambda = &a[k] / &b[k];
    a.iter().zip(b).all(|(x, y)| *x == &lambda * y).then_some(lambda)
}

/// A finite arrangement of (linear or affine) hyperplanes in `R^n` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    mode: Mode,
    warnings: Vec<String>,
}

/// The central arrangement of linear parts of an affine arrangement, with the map sending
/// each affine hyperplane to the index of its linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearization {
    pub arrangement: Arrangement,
    /// `index[h]` is the linear hyperplane parallel to affine hyperplane `h`.
    pub index: Vec<usize>,
}

impl Arrangement {
    /// Validates and builds an arrangement. Exact duplicates are rejected; hyperplanes with
    /// the same zero set but a rescaled equation are merged (first one kept) with a warning.
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>, mode: Mode) -> Result<Self, ArrangementError> {
        if dim == 0 {
            return Err(ArrangementError::ZeroDimension);
        }
        let mut kept: Vec<Hyperplane> = Vec::new();
        let mut origin: Vec<usize> = Vec::new();
        let mut warnings = Vec::new();
        for (i, h) in hyperplanes.into_iter().enumerate() {
            if h.normal.len() != dim {
                return Err(ArrangementError::WrongLength { index: i, expected: dim, found: h.normal.len() });
            }
            if h.normal.iter().all(Zero::is_zero) {
                return Err(ArrangementError::ZeroNormal(i));
            }
            if mode == Mode::Central && !h.offset.is_zero() {
                return Err(ArrangementError::NonzeroOffset(i));
            }
            if let Some(j) = kept.iter().position(|k| *k == h) {
                return Err(ArrangementError::DuplicateHyperplane { first: origin[j], second: i });
            }
            if let Some(j) = kept.iter().position(|k| h.ratio_to(k).is_some()) {
                let msg = format!("hyperplane {i} has the same zero set as hyperplane {}; merged", origin[j]);
                log::warn!("{msg}");
                warnings.push(msg);
                continue;
            }
            origin.push(i);
            kept.push(h);
        }
        Ok(Arrangement { dim, hyperplanes: kept, mode, warnings })
    }

    /// Central arrangement from integer normals.
    pub fn central(dim: usize, normals: &[&[i64]]) -> Result<Self, ArrangementError> {
        Arrangement::new(dim, normals.iter().map(|n| Hyperplane::linear(n)).collect(), Mode::Central)
    }

    /// The coordinate hyperplanes `x_i = 0` in `R^n`.
    pub fn boolean(n: usize) -> Self {
        let hs = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                Hyperplane::linear(&v)
            })
            .collect();
        Arrangement::new(n, hs, Mode::Central).expect("boolean arrangement is valid")
    }

    /// `m` pairwise distinct lines through the origin of `R^2`, normals `(1, k)` for `k < m - 1`
    /// and `(0, 1)`.
    pub fn concurrent_lines(m: usize) -> Self {
        let mut hs: Vec<Hyperplane> = (0..m.saturating_sub(1)).map(|k| Hyperplane::linear(&[1, k as i64])).collect();
        if m > 0 {
            hs.push(Hyperplane::linear(&[0, 1]));
        }
        Arrangement::new(2, hs, Mode::Central).expect("distinct lines")
    }

    /// The points `a_1, ..., a_k` of the real line, as an affine arrangement.
    pub fn points_on_line(points: &[i64]) -> Self {
        let hs = points.iter().map(|&p| Hyperplane::affine(&[1], int(p))).collect();
        Arrangement::new(1, hs, Mode::Affine).expect("distinct points")
    }

    /// Arrangement in `R^{n1+n2}` whose hyperplanes are those of `self` and of `other`
    /// pulled back along the two projections.
    pub fn product(&self, other: &Arrangement) -> Self {
        let n = self.dim + other.dim;
        let mut hs = Vec::new();
        for h in &self.hyperplanes {
            let mut normal = h.normal.clone();
            normal.resize(n, Scalar::zero());
            hs.push(Hyperplane::new(normal, h.offset.clone()));
        }
        for h in &other.hyperplanes {
            let mut normal = vec![Scalar::zero(); self.dim];
            normal.extend(h.normal.iter().cloned());
            hs.push(Hyperplane::new(normal, h.offset.clone()));
        }
        let mode = if self.mode == Mode::Affine || other.mode == Mode::Affine { Mode::Affine } else { Mode::Central };
        Arrangement::new(n, hs, mode).expect("product of valid arrangements")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_central(&self) -> bool {
        self.mode == Mode::Central
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Rank of the normals of the given hyperplanes.
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        let rows: Vec<Vec<Scalar>> = indices.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect();
        let m = Matrix::from_rows(rows, self.dim).expect("normals have ambient length");
        FieldSpec::Rationals.rank(&m)
    }

    /// Central and the common intersection of the hyperplanes is `{0}`.
    pub fn is_essential(&self) -> bool {
        self.is_central() && self.rank_of(&(0..self.len()).collect::<Vec<_>>()) == self.dim
    }

    /// Linear parts with repetitions (up to a nonzero scalar) removed. For a central
    /// arrangement this is the arrangement itself with the identity index map.
    pub fn linearization(&self) -> Linearization {
        let mut lin: Vec<Hyperplane> = Vec::new();
        let mut index = Vec::with_capacity(self.len());
        for h in &self.hyperplanes {
            match lin.iter().position(|l| proportional(&h.normal, &l.normal).is_some()) {
                Some(j) => index.push(j),
                None => {
                    index.push(lin.len());
                    lin.push(Hyperplane::new(h.normal.clone(), Scalar::zero()));
                }
            }
        }
        let arrangement = Arrangement { dim: self.dim, hyperplanes: lin, mode: Mode::Central, warnings: Vec::new() };
        Linearization { arrangement, index }
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Central => "central",
            Mode::Affine => "affine",
        };
        write!(f, "{mode} arrangement of {} hyperplanes in R^{}", self.len(), self.dim)
    }
}
