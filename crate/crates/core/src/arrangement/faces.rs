use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parse_signs, sign_string, Arrangement, ArrangementError, Sign};
use crate::linalg::Scalar;
use crate::lp::{find_point, Constraint};

pub const DEFAULT_FACE_BUDGET: usize = 100_000;

/// Index of a face in its [`FacePoset`]. Faces are numbered in lexicographic order of their
/// sign vectors with `- < 0 < +`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub usize);

impl FaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A nonempty relatively open cell cut out by the arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub signs: Vec<Sign>,
    /// A point of the face. Integral for central arrangements.
    pub witness: Vec<Scalar>,
    pub dim: usize,
}

impl Face {
    pub fn label(&self) -> String {
        sign_string(&self.signs)
    }
}

/// Faces of an arrangement ordered by closure: `A <= B` iff `A` lies in the closure of `B`.
#[derive(Clone, Debug)]
pub struct FacePoset {
    ambient_dim: usize,
    central: bool,
    faces: Vec<Face>,
    index: HashMap<Vec<Sign>, FaceId>,
    up: Vec<Vec<FaceId>>,
    down: Vec<Vec<FaceId>>,
}

impl FacePoset {
    fn build(arr: &Arrangement, faces: Vec<Face>) -> Self {
        let index = faces.iter().enumerate().map(|(i, f)| (f.signs.clone(), FaceId(i))).collect();
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); arr.dim() + 1];
        for (i, f) in faces.iter().enumerate() {
            by_dim[f.dim].push(i);
        }
        let up: Vec<Vec<FaceId>> = faces
            .par_iter()
            .map(|a| match by_dim.get(a.dim + 1) {
                Some(cands) => cands.iter().filter(|&&b| leq_signs(&a.signs, &faces[b].signs)).map(|&b| FaceId(b)).collect(),
                None => Vec::new(),
            })
            .collect();
        let mut down = vec![Vec::new(); faces.len()];
        for (a, ups) in up.iter().enumerate() {
            for b in ups {
                down[b.0].push(FaceId(a));
            }
        }
        FacePoset { ambient_dim: arr.dim(), central: arr.is_central(), faces, index, up, down }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_central(&self) -> bool {
        self.central
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = FaceId> + ExactSizeIterator + Clone {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn signs(&self, id: FaceId) -> &[Sign] {
        &self.faces[id.0].signs
    }

    pub fn dim(&self, id: FaceId) -> usize {
        self.faces[id.0].dim
    }

    pub fn codim(&self, id: FaceId) -> usize {
        self.ambient_dim - self.faces[id.0].dim
    }

    pub fn label(&self, id: FaceId) -> String {
        self.faces[id.0].label()
    }

    pub fn find(&self, signs: &[Sign]) -> Option<FaceId> {
        self.index.get(signs).copied()
    }

    /// Looks a face up by its sign string.
    pub fn parse(&self, label: &str) -> Result<FaceId, ArrangementError> {
        let signs = parse_signs(label)?;
        self.find(&signs).ok_or_else(|| ArrangementError::UnknownFace(label.to_string()))
    }

    pub fn leq(&self, a: FaceId, b: FaceId) -> bool {
        leq_signs(self.signs(a), self.signs(b))
    }

    pub fn lt(&self, a: FaceId, b: FaceId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Faces covering `a`.
    pub fn upper_covers(&self, a: FaceId) -> &[FaceId] {
        &self.up[a.0]
    }

    /// Faces covered by `b`.
    pub fn lower_covers(&self, b: FaceId) -> &[FaceId] {
        &self.down[b.0]
    }

    pub fn is_cover(&self, a: FaceId, b: FaceId) -> bool {
        self.up[a.0].contains(&b)
    }

    /// All cover relations `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(FaceId, FaceId)> {
        self.ids().flat_map(|a| self.up[a.0].iter().map(move |&b| (a, b))).collect()
    }

    pub fn faces_above(&self, a: FaceId) -> Vec<FaceId> {
        self.ids().filter(|&b| self.leq(a, b)).collect()
    }

    pub fn faces_below(&self, b: FaceId) -> Vec<FaceId> {
        self.ids().filter(|&a| self.leq(a, b)).collect()
    }

    /// Faces `b` with `a ⋖ b ⋖ c`.
    pub fn between(&self, a: FaceId, c: FaceId) -> Vec<FaceId> {
        self.up[a.0].iter().copied().filter(|&b| self.is_cover(b, c)).collect()
    }

    /// Faces of top dimension.
    pub fn chambers(&self) -> Vec<FaceId> {
        self.ids().filter(|&f| self.dim(f) == self.ambient_dim).collect()
    }

    /// The face with all signs zero, present iff the arrangement has a common point.
    pub fn zero_face(&self) -> Option<FaceId> {
        self.index.iter().find(|(s, _)| s.iter().all(|x| x.is_zero())).map(|(_, &id)| id)
    }

    /// `-A` for a central arrangement.
    pub fn opposite(&self, a: FaceId) -> Option<FaceId> {
        let flipped: Vec<Sign> = self.signs(a).iter().map(|s| s.flip()).collect();
        self.find(&flipped)
    }

    /// Hyperplanes containing the face.
    pub fn zero_set(&self, id: FaceId) -> Vec<usize> {
        hyperplanes_containing(self, id)
    }
}

pub(crate) fn leq_signs(a: &[Sign], b: &[Sign]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_zero() || x == y)
}

pub fn hyperplanes_containing(poset: &FacePoset, id: FaceId) -> Vec<usize> {
    poset.signs(id).iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i).collect()
}

/// The Tits product `B ∘ A`: the face containing `b + ε(a - b)` for small `ε > 0`.
pub fn tits_product(poset: &FacePoset, b: FaceId, a: FaceId) -> Result<FaceId, ArrangementError> {
    if !poset.is_central() {
        return Err(ArrangementError::NotCentral);
    }
    let signs: Vec<Sign> = poset
        .signs(b)
        .iter()
        .zip(poset.signs(a))
        .map(|(&sb, &sa)| if sb.is_zero() { sa } else { sb })
        .collect();
    poset.find(&signs).ok_or_else(|| {
        ArrangementError::Internal(format!(
            "Tits product {} o {} = {} is not a face",
            poset.label(b),
            poset.label(a),
            sign_string(&signs)
        ))
    })
}

fn constraints(arr: &Arrangement, signs: &[Sign]) -> (Vec<Constraint>, Vec<Constraint>) {
    let mut eq = Vec::new();
    let mut strict = Vec::new();
    for (h, s) in arr.hyperplanes().iter().zip(signs) {
        match s {
            Sign::Zero => eq.push(Constraint { normal: h.normal.clone(), rhs: h.offset.clone() }),
            Sign::Pos => strict.push(Constraint { normal: h.normal.clone(), rhs: h.offset.clone() }),
            Sign::Neg => strict.push(Constraint { normal: h.normal.iter().map(|x| -x).collect(), rhs: -&h.offset }),
        }
    }
    (eq, strict)
}

fn clear_denominators(x: Vec<Scalar>) -> Vec<Scalar> {
    let l = x.iter().fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let l = Scalar::from_integer(l);
    x.into_iter().map(|v| v * &l).collect()
}

/// Enumerates all faces by inserting hyperplanes one at a time. Each candidate sign vector is
/// tested first against its parent's witness and otherwise by an exact LP.
pub fn enumerate_faces(arr: &Arrangement, budget: usize) -> Result<FacePoset, ArrangementError> {
    let n = arr.dim();
    let mut current: Vec<(Vec<Sign>, Vec<Scalar>)> = vec![(Vec::new(), vec![Scalar::zero(); n])];
    let hs = arr.hyperplanes();
    for k in 0..hs.len() {
        let prefix = Arrangement::new(n, hs[..=k].to_vec(), arr.mode()).map_err(|e| ArrangementError::Internal(e.to_string()))?;
        current = current
            .into_par_iter()
            .flat_map_iter(|(signs, witness)| {
                let here = Sign::of(&hs[k].eval(&witness));
                let mut out = Vec::with_capacity(3);
                for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
                    let mut child = signs.clone();
                    child.push(s);
                    if s == here {
                        out.push((child, witness.clone()));
                        continue;
                    }
                    let (eq, strict) = constraints(&prefix, &child);
                    if let Some(x) = find_point(n, &eq, &strict) {
                        out.push((child, x));
                    }
                }
                out
            })
            .collect();
        if current.len() > budget {
            return Err(ArrangementError::FaceBudgetExceeded { budget });
        }
    }
    if current.len() > budget {
        return Err(ArrangementError::FaceBudgetExceeded { budget });
    }
    current.sort_by(|a, b| a.0.cmp(&b.0));
    let faces: Vec<Face> = current
        .into_par_iter()
        .map(|(signs, witness)| {
            let zeros: Vec<usize> = signs.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i).collect();
            let dim = n - arr.rank_of(&zeros);
            let witness = if arr.is_central() { clear_denominators(witness) } else { witness };
            Face { signs, witness, dim }
        })
        .collect();
    Ok(FacePoset::build(arr, faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{int, Hyperplane, Mode};

    fn poset(arr: &Arrangement) -> FacePoset {
        enumerate_faces(arr, DEFAULT_FACE_BUDGET).unwrap()
    }

    #[test]
    fn line_with_origin() {
        let p = poset(&Arrangement::boolean(1));
        let labels: Vec<String> = p.ids().map(|f| p.label(f)).collect();
        assert_eq!(labels, ["-", "0", "+"]);
        assert_eq!(p.dim(FaceId(1)), 0);
        assert_eq!(p.covers(), vec![(FaceId(1), FaceId(0)), (FaceId(1), FaceId(2))]);
        assert_eq!(p.zero_face(), Some(FaceId(1)));
    }

    #[test]
    fn face_counts() {
        assert_eq!(poset(&Arrangement::boolean(2)).len(), 9);
        assert_eq!(poset(&Arrangement::boolean(3)).len(), 27);
        // three concurrent lines: origin, six rays, six sectors
        let p = poset(&Arrangement::concurrent_lines(3));
        assert_eq!(p.len(), 13);
        assert_eq!(p.chambers().len(), 6);
        // two points on the line: 2 vertices, 3 intervals
        assert_eq!(poset(&Arrangement::points_on_line(&[0, 1])).len(), 5);
    }

    #[test]
    fn witnesses_realize_sign_vectors() {
        let arr = Arrangement::concurrent_lines(4);
        let p = poset(&arr);
        for f in p.faces() {
            for (h, s) in arr.hyperplanes().iter().zip(&f.signs) {
                assert_eq!(Sign::of(&h.eval(&f.witness)), *s);
            }
            assert!(f.witness.iter().all(|x| x.is_integer()));
        }
    }

    #[test]
    fn non_essential_dimensions() {
        let arr = Arrangement::central(3, &[&[1, 0, 0]]).unwrap();
        let p = poset(&arr);
        assert_eq!(p.len(), 3);
        assert_eq!(p.dim(p.parse("0").unwrap()), 2);
        assert_eq!(p.dim(p.parse("+").unwrap()), 3);
    }

    #[test]
    fn tits_product_examples() {
        let p = poset(&Arrangement::boolean(2));
        let f = |s: &str| p.parse(s).unwrap();
        assert_eq!(tits_product(&p, f("0+"), f("-0")), Ok(f("-+")));
        assert_eq!(tits_product(&p, f("00"), f("+-")), Ok(f("+-")));
        assert_eq!(tits_product(&p, f("+-"), f("-+")), Ok(f("+-")));
        let affine = poset(&Arrangement::points_on_line(&[0]));
        assert_eq!(tits_product(&affine, FaceId(0), FaceId(1)), Err(ArrangementError::NotCentral));
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_faces(&Arrangement::boolean(3), 10).unwrap_err();
        assert_eq!(err, ArrangementError::FaceBudgetExceeded { budget: 10 });
    }

    #[test]
    fn affine_witnesses_may_be_fractional() {
        let hs = vec![Hyperplane::affine(&[1], int(0)), Hyperplane::affine(&[2], int(1))];
        let p = poset(&Arrangement::new(1, hs, Mode::Affine).unwrap());
        assert_eq!(p.len(), 5);
        assert!(p.zero_face().is_none());
        let mid = p.parse("+-").unwrap();
        let x = &p.face(mid).witness[0];
        assert!(*x > int(0) && x * int(2) < int(1));
    }
}
