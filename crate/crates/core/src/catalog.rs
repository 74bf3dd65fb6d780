//! Standard examples: diagrams over four small arrangements, morphisms between them, and the
//! verdicts each diagram is expected to get.
//!
//! Expectations are written by hand from what the diagrams are (a constant sheaf, a point,
//! an extension across the origin), not computed by this crate.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arrangement::{Arrangement, DEFAULT_FACE_BUDGET};
use crate::diagram::{external_product, external_product_morphism, required_isos, DiagramError, DiagramMorphism, MatrixDiagram};
use crate::dirac::{dirac_preimage, lift_dirac_morphism, DiracDiagram, DiracMorphism};
use crate::linalg::{Cohomology, FieldSpec, Matrix};
use crate::strata::Strata;

const Q: FieldSpec = FieldSpec::Rationals;

pub struct NamedStrata {
    pub name: &'static str,
    pub strata: Strata,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub perverse: bool,
    /// `(dim E_-, dim E_0, dim E_+)` for diagrams over the line.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dirac_dims: Option<(usize, usize, usize)>,
    /// Compactly supported cohomology, where it is known independently.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compact_cohomology: Option<Cohomology>,
}

pub struct Entry {
    pub name: &'static str,
    /// Index into [`Catalog::arrangements`].
    pub arrangement: usize,
    pub diagram: MatrixDiagram,
    pub expect: Expectation,
}

pub struct MorphismEntry {
    pub name: &'static str,
    /// Indices into [`Catalog::entries`].
    pub source: usize,
    pub target: usize,
    pub morphism: DiagramMorphism,
}

pub struct Catalog {
    pub arrangements: Vec<NamedStrata>,
    pub entries: Vec<Entry>,
    pub morphisms: Vec<MorphismEntry>,
}

fn col(v: &[i64]) -> Matrix {
    Matrix::from_i64(v.len(), 1, v)
}

fn row(v: &[i64]) -> Matrix {
    Matrix::from_i64(1, v.len(), v)
}

/// `k ⇄ k² ⇄ k` with `δ_- = e1`, `δ_+ = e2` and the given `γ_∓`.
fn rank_two_center(gamma_minus: &[i64], gamma_plus: &[i64]) -> Result<DiracDiagram, DiagramError> {
    DiracDiagram::new(Q, col(&[1, 0]), col(&[0, 1]), row(gamma_minus), row(gamma_plus))
}

fn hc(pairs: &[(i64, usize)]) -> Option<Cohomology> {
    Some(pairs.iter().copied().collect())
}

impl Catalog {
    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn strata_of(&self, e: &Entry) -> &Strata {
        &self.arrangements[e.arrangement].strata
    }

    pub fn arrangement_name(&self, e: &Entry) -> &'static str {
        self.arrangements[e.arrangement].name
    }

    fn push(&mut self, name: &'static str, arrangement: usize, diagram: MatrixDiagram, expect: Expectation) -> usize {
        self.entries.push(Entry { name, arrangement, diagram, expect });
        self.entries.len() - 1
    }

    fn push_morphism(&mut self, name: &'static str, source: usize, target: usize, morphism: DiagramMorphism) {
        self.morphisms.push(MorphismEntry { name, source, target, morphism });
    }
}

/// Builds the catalog over `Q`.
pub fn catalog() -> Result<Catalog, DiagramError> {
    let strata = |a: Arrangement| Strata::new(a, DEFAULT_FACE_BUDGET).map_err(|e| DiagramError::Internal(e.to_string()));
    let line = strata(Arrangement::boolean(1))?;
    let plane = strata(Arrangement::boolean(1).product(&Arrangement::boolean(1)))?;
    let lines3 = strata(Arrangement::concurrent_lines(3))?;
    let affine = strata(Arrangement::points_on_line(&[0, 1]))?;
    let face = |s: &Strata, real: bool, l: &str| {
        let p = if real { s.real() } else { s.imag() };
        p.parse(l).map_err(|e| DiagramError::Internal(e.to_string()))
    };

    let constant = MatrixDiagram::constant(&line, Q);
    let z = face(&line, true, "0")?;
    let sky = MatrixDiagram::point(&line, Q, z, z);
    let j_shriek_dd = rank_two_center(&[1, 1], &[1, 1])?;
    let j_shriek = dirac_preimage(&line, &j_shriek_dd)?;
    let j_star = j_shriek.dualize(&line)?;
    let twisted = dirac_preimage(&line, &rank_two_center(&[1, -1], &[1, 1])?)?;
    // the constant sheaf plus a point at the origin, presented with a rank-2 center
    let doubled = constant.direct_sum(&sky)?;

    let prod = |a: &MatrixDiagram, b: &MatrixDiagram| external_product(&line, a, &line, b, &plane);
    let plane_constant = MatrixDiagram::constant(&plane, Q);
    let sky_sky = prod(&sky, &sky)?;
    let sky_const = prod(&sky, &constant)?;
    let shriek_const = prod(&j_shriek, &constant)?;

    let lz = face(&lines3, true, "000")?;
    let lines3_sky = MatrixDiagram::point(&lines3, Q, lz, lz);

    let at0 = MatrixDiagram::point(&affine, Q, face(&affine, false, "0")?, face(&affine, true, "0-")?);
    let at1 = MatrixDiagram::point(&affine, Q, face(&affine, false, "0")?, face(&affine, true, "+0")?);

    let mut c = Catalog { arrangements: Vec::new(), entries: Vec::new(), morphisms: Vec::new() };
    let line_expect = |dims, h| Expectation { perverse: true, dirac_dims: Some(dims), compact_cohomology: h };
    let expect = |h| Expectation { perverse: true, dirac_dims: None, compact_cohomology: h };

    let e_const = c.push("line-constant", 0, constant.clone(), line_expect((1, 1, 1), hc(&[(2, 1)])));
    let e_sky = c.push("line-skyscraper", 0, sky.clone(), line_expect((0, 1, 0), hc(&[(1, 1)])));
    // the extension by zero from C*: H_c(C*) is k in degrees 1 and 2
    let e_shriek = c.push("line-j-shriek", 0, j_shriek.clone(), line_expect((1, 2, 1), hc(&[(1, 1), (2, 1)])));
    let e_star = c.push("line-j-star", 0, j_star.clone(), line_expect((1, 2, 1), None));
    // a rank-one local system on C* with monodromy -1 has no cohomology
    let e_twisted = c.push("line-twisted", 0, twisted.clone(), line_expect((1, 2, 1), hc(&[])));
    c.push("line-doubled-center", 0, doubled, line_expect((1, 2, 1), hc(&[(1, 1), (2, 1)])));
    c.push("plane-constant", 1, plane_constant, expect(hc(&[(4, 1)])));
    c.push("plane-skyscraper", 1, sky_sky, expect(hc(&[(2, 1)])));
    let e_sky_const = c.push("plane-skyscraper-x-constant", 1, sky_const.clone(), expect(hc(&[(3, 1)])));
    let e_shriek_const = c.push("plane-j-shriek-x-constant", 1, shriek_const.clone(), expect(hc(&[(3, 1), (4, 1)])));
    c.push("three-lines-constant", 2, MatrixDiagram::constant(&lines3, Q), expect(hc(&[(4, 1)])));
    c.push("three-lines-skyscraper", 2, lines3_sky, expect(hc(&[(2, 1)])));
    let e_aff = c.push("affine-constant", 3, MatrixDiagram::constant(&affine, Q), expect(hc(&[(2, 1)])));
    c.push("affine-skyscraper-at-0", 3, at0, expect(hc(&[(1, 1)])));
    c.push("affine-skyscraper-at-1", 3, at1, expect(hc(&[(1, 1)])));

    c.push_morphism("line-constant-identity", e_const, e_const, DiagramMorphism::identity(&constant));
    c.push_morphism("line-constant-zero", e_const, e_const, DiagramMorphism::zero(&constant, &constant)?);
    c.push_morphism("line-skyscraper-identity", e_sky, e_sky, DiagramMorphism::identity(&sky));
    c.push_morphism("line-j-shriek-identity", e_shriek, e_shriek, DiagramMorphism::identity(&j_shriek));
    let sky_to_shriek = DiagramMorphism::new(&sky, &j_shriek, BTreeMap::from([((z, z), col(&[1, -1]))]))?;
    let shriek_to_const = lift_dirac_morphism(
        &line,
        &DiracMorphism { f_minus: Matrix::identity(1), f_zero: row(&[1, 1]), f_plus: Matrix::identity(1) },
        &j_shriek,
        &constant,
    )?;
    c.push_morphism("line-const-to-j-star", e_const, e_star, shriek_to_const.dualize(&line)?);
    c.push_morphism("line-j-star-to-skyscraper", e_star, e_sky, sky_to_shriek.dualize(&line)?);
    c.push_morphism("line-skyscraper-to-j-shriek", e_sky, e_shriek, sky_to_shriek.clone());
    c.push_morphism("line-j-shriek-to-constant", e_shriek, e_const, shriek_to_const);
    c.push_morphism("line-twisted-double", e_twisted, e_twisted, DiagramMorphism::identity(&twisted).scale(&crate::arrangement::int(2)));
    let (_, _, m) = external_product_morphism(&line, (&sky_to_shriek, &sky, &j_shriek), &line, (&DiagramMorphism::identity(&constant), &constant, &constant), &plane)?;
    c.push_morphism("plane-skyscraper-to-j-shriek-x-constant", e_sky_const, e_shriek_const, m);
    let aff = &c.entries[e_aff].diagram;
    let (aff_id, aff_zero) = (DiagramMorphism::identity(aff), DiagramMorphism::zero(aff, aff)?);
    c.push_morphism("affine-identity", e_aff, e_aff, aff_id);
    c.push_morphism("affine-zero", e_aff, e_aff, aff_zero);

    c.arrangements = vec![
        NamedStrata { name: "line", strata: line },
        NamedStrata { name: "plane", strata: plane },
        NamedStrata { name: "three-lines", strata: lines3 },
        NamedStrata { name: "affine-0-1", strata: affine },
    ];
    Ok(c)
}

/// Diagrams that must be rejected, with the index of their arrangement in [`Catalog`]:
/// a broken rim isomorphism on the line, and a rank-2 center whose maps do not commute.
pub fn negative_examples() -> Result<Vec<(&'static str, usize, MatrixDiagram)>, DiagramError> {
    let c = catalog()?;
    let s = &c.arrangements[0].strata;
    let f = |l: &str| s.real().parse(l).map_err(|e| DiagramError::Internal(e.to_string()));
    let (minus, zero, plus) = (f("-")?, f("0")?, f("+")?);
    let mut broken = MatrixDiagram::constant(s, Q);
    broken.set_dprime((minus, zero, plus), Matrix::scalar(0))?;
    let mut skew = c.entry("line-doubled-center").expect("catalog entry").diagram.clone();
    skew.set_dprime((zero, zero, plus), row(&[0, 1]))?;
    Ok(vec![("line-broken-rim", 0, broken), ("line-doubled-center-skew", 0, skew)])
}

/// A non-invertible replacement for a square `k×k` map: zero, and for `k ≥ 2` the identity
/// with its last diagonal entry cleared.
fn degenerate(k: usize) -> Vec<(&'static str, Matrix)> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = vec![("zero", Matrix::zeros(k, k))];
    if k >= 2 {
        let mut m = Matrix::identity(k);
        m.set(k - 1, k - 1, crate::arrangement::int(0));
        out.push(("rank-deficient", m));
    }
    out
}

/// Every diagram obtained from `d` by making one required isomorphism non-invertible,
/// labelled by the map that was changed. Maps between zero spaces are skipped.
pub fn mutations(strata: &Strata, d: &MatrixDiagram) -> Result<Vec<(String, MatrixDiagram)>, DiagramError> {
    let (imag, real) = (strata.imag(), strata.real());
    let (prime, second) = required_isos(strata);
    let mut out = Vec::new();
    for (a, b1, b2) in prime {
        for (how, m) in degenerate(d.dim(a, b1)) {
            let mut x = d.clone();
            x.set_dprime((a, b1, b2), m)?;
            out.push((format!("dprime {}|{}->{} {how}", imag.label(a), real.label(b1), real.label(b2)), x));
        }
    }
    for (a2, a1, b) in second {
        for (how, m) in degenerate(d.dim(a2, b)) {
            let mut x = d.clone();
            x.set_dsecond((a2, a1, b), m)?;
            out.push((format!("dsecond {}->{}|{} {how}", imag.label(a2), imag.label(a1), real.label(b)), x));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::validate;

    #[test]
    fn entries_validate_and_morphisms_commute() {
        let c = catalog().unwrap();
        for e in &c.entries {
            assert!(validate(c.strata_of(e), &e.diagram).unwrap().passes(), "{}", e.name);
        }
        assert!(c.morphisms.len() >= 10);
        for m in &c.morphisms {
            let (s, t) = (&c.entries[m.source], &c.entries[m.target]);
            assert!(m.morphism.failures(c.strata_of(s), &s.diagram, &t.diagram).unwrap().is_empty(), "{}", m.name);
        }
    }
}
