//! Perverse sheaves on `(C, 0)` as Dirac diagrams.
//!
//! A Dirac diagram is `E_- ⇄ E_0 ⇄ E_+` with `δ_±: E_± -> E_0` and `γ_±: E_0 -> E_±` such that
//! `γ_-δ_- = Id`, `γ_+δ_+ = Id` and `γ_-δ_+`, `γ_+δ_-` are invertible.
//!
//! A 3×3 matrix diagram over the arrangement `{0} ⊂ R` gives one: `δ_±` are the maps
//! `∂″` on the middle row, and `γ_∓` go around the `±` column, inverting the rim maps on the way.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arrangement::FaceId;
use crate::diagram::{validate, DiagramError, DiagramMorphism, MatrixDiagram};
use crate::linalg::{FieldSpec, Matrix};
use crate::strata::Strata;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracDiagram {
    pub field: FieldSpec,
    pub e_minus: usize,
    pub e_zero: usize,
    pub e_plus: usize,
    pub delta_minus: Matrix,
    pub delta_plus: Matrix,
    pub gamma_minus: Matrix,
    pub gamma_plus: Matrix,
}

/// Failed conditions, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiracReport {
    pub failures: Vec<String>,
}

impl DiracReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The three faces `-`, `0`, `+` of the line.
#[derive(Clone, Copy, Debug)]
struct Line {
    minus: FaceId,
    zero: FaceId,
    plus: FaceId,
}

fn line_faces(strata: &Strata) -> Result<Line, DiagramError> {
    let arr = strata.arrangement();
    if !strata.is_central() {
        return Err(DiagramError::NotCentral);
    }
    if arr.dim() != 1 || arr.len() != 1 {
        return Err(DiagramError::WrongSize("expected the arrangement {0} in R".into()));
    }
    let f = |l: &str| strata.real().parse(l).map_err(|e| DiagramError::Internal(e.to_string()));
    Ok(Line { minus: f("-")?, zero: f("0")?, plus: f("+")? })
}

impl DiracDiagram {
    pub fn new(field: FieldSpec, delta_minus: Matrix, delta_plus: Matrix, gamma_minus: Matrix, gamma_plus: Matrix) -> Result<Self, DiagramError> {
        let (e_zero, e_minus) = delta_minus.shape();
        let e_plus = delta_plus.cols();
        let mut errors = Vec::new();
        let mut expect = |name: &str, m: &Matrix, shape: (usize, usize)| {
            if m.shape() != shape {
                errors.push(format!("{name} is {:?}, expected {shape:?}", m.shape()));
            }
        };
        expect("delta_plus", &delta_plus, (e_zero, e_plus));
        expect("gamma_minus", &gamma_minus, (e_minus, e_zero));
        expect("gamma_plus", &gamma_plus, (e_plus, e_zero));
        if !errors.is_empty() {
            return Err(DiagramError::Shape(errors));
        }
        Ok(DiracDiagram {
            field,
            e_minus,
            e_zero,
            e_plus,
            delta_minus: field.normalize_matrix(&delta_minus)?,
            delta_plus: field.normalize_matrix(&delta_plus)?,
            gamma_minus: field.normalize_matrix(&gamma_minus)?,
            gamma_plus: field.normalize_matrix(&gamma_plus)?,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.e_minus, self.e_zero, self.e_plus)
    }
}

/// Checks the four Dirac conditions exactly.
pub fn validate_dirac(dd: &DiracDiagram) -> Result<DiracReport, DiagramError> {
    let f = dd.field;
    let mut failures = Vec::new();
    if f.mul(&dd.gamma_minus, &dd.delta_minus)? != Matrix::identity(dd.e_minus) {
        failures.push("gamma_minus delta_minus = Id".to_string());
    }
    if f.mul(&dd.gamma_plus, &dd.delta_plus)? != Matrix::identity(dd.e_plus) {
        failures.push("gamma_plus delta_plus = Id".to_string());
    }
    if !f.is_invertible(&f.mul(&dd.gamma_minus, &dd.delta_plus)?) {
        failures.push("gamma_minus delta_plus invertible".to_string());
    }
    if !f.is_invertible(&f.mul(&dd.gamma_plus, &dd.delta_minus)?) {
        failures.push("gamma_plus delta_minus invertible".to_string());
    }
    Ok(DiracReport { failures })
}

fn invert(field: FieldSpec, m: &Matrix, what: &str) -> Result<Matrix, DiagramError> {
    field.inverse(m).ok_or_else(|| DiagramError::Internal(format!("{what} is not invertible")))
}

/// Converts a diagram over the line. The rim maps must be invertible.
pub fn to_dirac(strata: &Strata, d: &MatrixDiagram) -> Result<DiracDiagram, DiagramError> {
    let l = line_faces(strata)?;
    let f = d.field();
    // γ_- = (∂′_{-|0,+})^{-1} (∂″_{-,0|+})^{-1} ∂′_{0|0,+}
    let around = |side: FaceId, column: FaceId| -> Result<Matrix, DiagramError> {
        let down = invert(f, d.dprime(side, l.zero, column), "rim dprime")?;
        let across = invert(f, d.dsecond(side, l.zero, column), "rim dsecond")?;
        Ok(f.mul(&down, &f.mul(&across, d.dprime(l.zero, l.zero, column))?)?)
    };
    let gamma_minus = around(l.minus, l.plus)?;
    let gamma_plus = around(l.plus, l.minus)?;
    DiracDiagram::new(f, d.dsecond(l.minus, l.zero, l.zero).clone(), d.dsecond(l.plus, l.zero, l.zero).clone(), gamma_minus, gamma_plus)
}

/// A 3×3 diagram whose Dirac diagram is `dd`, built directly and then checked: the result
/// must validate and convert back to `dd`.
///
/// The middle row is `E_- -> E_0 <- E_+` with `δ`. The `+` row is `(E_-, E_-, E_+)` with
/// `∂″_{+,0|+} = γ_-δ_+` and every other rim map the identity, so `∂′_{0|0,+} = γ_-`. The `-`
/// row mirrors it.
pub fn dirac_preimage(strata: &Strata, dd: &DiracDiagram) -> Result<MatrixDiagram, DiagramError> {
    let l = line_faces(strata)?;
    let f = dd.field;
    let (em, ez, ep) = dd.dims();
    let dims = BTreeMap::from([
        ((l.minus, l.zero), em),
        ((l.zero, l.zero), ez),
        ((l.plus, l.zero), ep),
        ((l.minus, l.plus), em),
        ((l.zero, l.plus), em),
        ((l.plus, l.plus), ep),
        ((l.minus, l.minus), em),
        ((l.zero, l.minus), ep),
        ((l.plus, l.minus), ep),
    ]);
    let dprime = BTreeMap::from([
        ((l.zero, l.zero, l.plus), dd.gamma_minus.clone()),
        ((l.zero, l.zero, l.minus), dd.gamma_plus.clone()),
        ((l.minus, l.zero, l.plus), Matrix::identity(em)),
        ((l.plus, l.zero, l.plus), Matrix::identity(ep)),
        ((l.minus, l.zero, l.minus), Matrix::identity(em)),
        ((l.plus, l.zero, l.minus), Matrix::identity(ep)),
    ]);
    let dsecond = BTreeMap::from([
        ((l.minus, l.zero, l.zero), dd.delta_minus.clone()),
        ((l.plus, l.zero, l.zero), dd.delta_plus.clone()),
        ((l.minus, l.zero, l.plus), Matrix::identity(em)),
        ((l.plus, l.zero, l.plus), f.mul(&dd.gamma_minus, &dd.delta_plus)?),
        ((l.plus, l.zero, l.minus), Matrix::identity(ep)),
        ((l.minus, l.zero, l.minus), f.mul(&dd.gamma_plus, &dd.delta_minus)?),
    ]);
    let d = MatrixDiagram::from_parts(strata, f, dims, dprime, dsecond)?;
    let report = validate(strata, &d)?;
    if !report.passes() {
        return Err(DiagramError::Internal("preimage does not validate; is the Dirac diagram valid?".into()));
    }
    if &to_dirac(strata, &d)? != dd {
        return Err(DiagramError::Internal("preimage does not convert back".into()));
    }
    Ok(d)
}

/// Components `f_-`, `f_0`, `f_+` of a map of Dirac diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracMorphism {
    pub f_minus: Matrix,
    pub f_zero: Matrix,
    pub f_plus: Matrix,
}

impl DiracMorphism {
    /// Names of the squares with `γ` or `δ` that do not commute.
    pub fn failures(&self, source: &DiracDiagram, target: &DiracDiagram) -> Result<Vec<String>, DiagramError> {
        let f = source.field;
        let mut out = Vec::new();
        let mut check = |name: &str, left: Matrix, right: Matrix| {
            if left != right {
                out.push(name.to_string());
            }
        };
        check("delta_minus", f.mul(&target.delta_minus, &self.f_minus)?, f.mul(&self.f_zero, &source.delta_minus)?);
        check("delta_plus", f.mul(&target.delta_plus, &self.f_plus)?, f.mul(&self.f_zero, &source.delta_plus)?);
        check("gamma_minus", f.mul(&target.gamma_minus, &self.f_zero)?, f.mul(&self.f_minus, &source.gamma_minus)?);
        check("gamma_plus", f.mul(&target.gamma_plus, &self.f_zero)?, f.mul(&self.f_plus, &source.gamma_plus)?);
        Ok(out)
    }
}

/// The middle-row components of a diagram morphism.
pub fn to_dirac_morphism(strata: &Strata, m: &DiagramMorphism) -> Result<DiracMorphism, DiagramError> {
    let l = line_faces(strata)?;
    Ok(DiracMorphism {
        f_minus: m.component(l.minus, l.zero).clone(),
        f_zero: m.component(l.zero, l.zero).clone(),
        f_plus: m.component(l.plus, l.zero).clone(),
    })
}

/// Lifts a Dirac morphism to the diagrams built by [`dirac_preimage`].
pub fn lift_dirac_morphism(strata: &Strata, m: &DiracMorphism, source: &MatrixDiagram, target: &MatrixDiagram) -> Result<DiagramMorphism, DiagramError> {
    let l = line_faces(strata)?;
    let comps = BTreeMap::from([
        ((l.minus, l.zero), m.f_minus.clone()),
        ((l.zero, l.zero), m.f_zero.clone()),
        ((l.plus, l.zero), m.f_plus.clone()),
        ((l.minus, l.plus), m.f_minus.clone()),
        ((l.zero, l.plus), m.f_minus.clone()),
        ((l.plus, l.plus), m.f_plus.clone()),
        ((l.minus, l.minus), m.f_minus.clone()),
        ((l.zero, l.minus), m.f_plus.clone()),
        ((l.plus, l.minus), m.f_plus.clone()),
    ]);
    DiagramMorphism::new(source, target, comps)
}

/// Serializable form with exact rational entries.
#[derive(Clone, Debug, Serialize)]
pub struct DiracView {
    pub dims: (usize, usize, usize),
    pub delta_minus: Vec<Vec<String>>,
    pub delta_plus: Vec<Vec<String>>,
    pub gamma_minus: Vec<Vec<String>>,
    pub gamma_plus: Vec<Vec<String>>,
    pub report: DiracReport,
}

impl DiracDiagram {
    pub fn view(&self) -> Result<DiracView, DiagramError> {
        Ok(DiracView {
            dims: self.dims(),
            delta_minus: self.delta_minus.to_strings(),
            delta_plus: self.delta_plus.to_strings(),
            gamma_minus: self.gamma_minus.to_strings(),
            gamma_plus: self.gamma_plus.to_strings(),
            report: validate_dirac(self)?,
        })
    }
}

/// The quiver `Φ ⇄ Ψ` with `a: Φ -> Ψ`, `b: Ψ -> Φ`. Only validation is provided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPsi {
    pub field: FieldSpec,
    pub a: Matrix,
    pub b: Matrix,
}

impl PhiPsi {
    /// Empty when the shapes fit and `Id_Ψ - ab` is invertible.
    pub fn failures(&self) -> Result<Vec<String>, DiagramError> {
        let (psi, phi) = self.a.shape();
        if self.b.shape() != (phi, psi) {
            return Err(DiagramError::Shape(vec![format!("b is {:?}, expected {:?}", self.b.shape(), (phi, psi))]));
        }
        let f = self.field;
        let (a, b) = (f.normalize_matrix(&self.a)?, f.normalize_matrix(&self.b)?);
        let t = f.sub(&Matrix::identity(psi), &f.mul(&a, &b)?)?;
        Ok(if f.is_invertible(&t) { Vec::new() } else { vec!["Id - ab invertible".to_string()] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{Arrangement, DEFAULT_FACE_BUDGET};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn line() -> Strata {
        Strata::new(Arrangement::boolean(1), DEFAULT_FACE_BUDGET).unwrap()
    }

    fn ids() -> DiracDiagram {
        let i = Matrix::identity(1);
        DiracDiagram::new(Q, i.clone(), i.clone(), i.clone(), i).unwrap()
    }

    #[test]
    fn constant_and_skyscraper() {
        let s = line();
        assert_eq!(to_dirac(&s, &MatrixDiagram::constant(&s, Q)).unwrap(), ids());
        let zero = s.real().parse("0").unwrap();
        let sky = to_dirac(&s, &MatrixDiagram::point(&s, Q, zero, zero)).unwrap();
        assert_eq!(sky.dims(), (0, 1, 0));
        assert!(validate_dirac(&sky).unwrap().passes());
    }

    #[test]
    fn named_failure() {
        let i = Matrix::identity(1);
        let dd = DiracDiagram::new(Q, Matrix::scalar(0), i.clone(), i.clone(), i).unwrap();
        let r = validate_dirac(&dd).unwrap();
        assert_eq!(r.failures, vec!["gamma_minus delta_minus = Id", "gamma_plus delta_minus invertible"]);
    }

    #[test]
    fn preimage_round_trip() {
        let s = line();
        let d = dirac_preimage(&s, &ids()).unwrap();
        assert_eq!(d, MatrixDiagram::constant(&s, Q));
        // two different retractions of the same two-dimensional E_0
        let dd = DiracDiagram::new(
            Q,
            Matrix::from_i64(2, 1, &[1, 0]),
            Matrix::from_i64(2, 1, &[0, 1]),
            Matrix::from_i64(1, 2, &[1, 1]),
            Matrix::from_i64(1, 2, &[1, 1]),
        )
        .unwrap();
        assert!(validate_dirac(&dd).unwrap().passes());
        let d = dirac_preimage(&s, &dd).unwrap();
        assert_eq!(to_dirac(&s, &d).unwrap(), dd);
    }

    #[test]
    fn preimage_rejects_invalid() {
        let i = Matrix::identity(1);
        let dd = DiracDiagram::new(Q, i.clone(), Matrix::scalar(0), i.clone(), i).unwrap();
        assert!(dirac_preimage(&line(), &dd).is_err());
    }

    #[test]
    fn phi_psi() {
        let p = PhiPsi { field: Q, a: Matrix::scalar(1), b: Matrix::scalar(1) };
        assert_eq!(p.failures().unwrap().len(), 1);
        let p = PhiPsi { field: Q, a: Matrix::scalar(1), b: Matrix::scalar(2) };
        assert!(p.failures().unwrap().is_empty());
    }
}
