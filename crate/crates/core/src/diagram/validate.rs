use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{DiagramError, MatrixDiagram, PrimeKey, SecondKey};
use crate::arrangement::{tits_product, FaceId, FacePoset};
use crate::linalg::{FieldSpec, Matrix};
use crate::strata::{ProductCell, Strata};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareKind {
    /// Two `∂′` steps at fixed `A`.
    Prime,
    /// Two `∂″` steps at fixed `B`.
    Second,
    /// One step of each.
    Mixed,
}

/// A non-commuting square. The imaginary faces are `imag_low ≤ imag_high`, the real ones
/// `real_low ≤ real_high`; for unmixed squares one of the two pairs is constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SquareFailure {
    pub kind: SquareKind,
    pub imag_low: String,
    pub imag_high: String,
    pub real_low: String,
    pub real_high: String,
}

/// A cover map that should be invertible but is not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IsoFailure {
    /// The face held fixed: `A` for `∂′`, `B` for `∂″`.
    pub fixed: String,
    pub low: String,
    pub high: String,
    /// Tits products (central) or stratum keys (affine) showing the two cells share a stratum.
    pub witnesses: (String, String),
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub squares: Vec<SquareFailure>,
    pub m3_prime: Vec<IsoFailure>,
    pub m3_second: Vec<IsoFailure>,
    /// Covers where the Tits condition and the stratum-key condition disagree.
    pub tits_key_mismatches: Vec<String>,
    /// Number of cover maps required to be invertible.
    pub required_isos: usize,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.squares.is_empty() && self.m3_prime.is_empty() && self.m3_second.is_empty() && self.tits_key_mismatches.is_empty()
    }
}

/// Cover maps that must be isomorphisms: `∂′_{A|B1,B2}` and `∂″_{A2,A1|B}` whose two cells
/// lie in the same complex stratum.
pub fn required_isos(strata: &Strata) -> (Vec<PrimeKey>, Vec<SecondKey>) {
    let (imag, real) = (strata.imag(), strata.real());
    let mut prime = Vec::new();
    for a in imag.ids() {
        for (b1, b2) in real.covers() {
            if strata.same_stratum(ProductCell::new(a, b1), ProductCell::new(a, b2)) {
                prime.push((a, b1, b2));
            }
        }
    }
    let mut second = Vec::new();
    for b in real.ids() {
        for (a1, a2) in imag.covers() {
            if strata.same_stratum(ProductCell::new(a1, b), ProductCell::new(a2, b)) {
                second.push((a2, a1, b));
            }
        }
    }
    (prime, second)
}

fn check_fits(strata: &Strata, d: &MatrixDiagram) -> Result<(), DiagramError> {
    if d.fits(strata) {
        Ok(())
    } else {
        Err(DiagramError::WrongSize(format!(
            "diagram is indexed by {}x{} faces, arrangement has {}x{}",
            d.imag_len(),
            d.real_len(),
            strata.imag().len(),
            strata.real().len()
        )))
    }
}

/// Checks all commuting squares and invertibility conditions. In central mode the
/// invertibility conditions are also evaluated through the Tits product and compared.
pub fn validate(strata: &Strata, d: &MatrixDiagram) -> Result<ValidationReport, DiagramError> {
    check_fits(strata, d)?;
    let field = d.field();
    let (imag, real) = (strata.imag(), strata.real());

    let mut squares: Vec<SquareFailure> = imag
        .ids()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&a| {
            let la = imag.label(a);
            length_two_failures(real, field, |b1, b2| d.dprime(a, b1, b2).clone()).into_iter().map(move |(b1, b3)| SquareFailure {
                kind: SquareKind::Prime,
                imag_low: la.clone(),
                imag_high: la.clone(),
                real_low: real.label(b1),
                real_high: real.label(b3),
            })
        })
        .collect();
    squares.par_extend(real.ids().collect::<Vec<_>>().par_iter().flat_map_iter(|&b| {
        let lb = real.label(b);
        // ∂″ runs downward, so compose along the reversed order
        length_two_failures_down(imag, field, |a2, a1| d.dsecond(a2, a1, b).clone()).into_iter().map(move |(a1, a3)| SquareFailure {
            kind: SquareKind::Second,
            imag_low: imag.label(a1),
            imag_high: imag.label(a3),
            real_low: lb.clone(),
            real_high: lb.clone(),
        })
    }));
    let imag_covers = imag.covers();
    let real_covers = real.covers();
    squares.par_extend(imag_covers.par_iter().flat_map_iter(|&(a1, a2)| {
        let real_covers = &real_covers;
        real_covers.iter().filter_map(move |&(b1, b2)| {
            let left = field.mul(d.dsecond(a2, a1, b2), d.dprime(a2, b1, b2)).expect("shapes");
            let right = field.mul(d.dprime(a1, b1, b2), d.dsecond(a2, a1, b1)).expect("shapes");
            (left != right).then(|| SquareFailure {
                kind: SquareKind::Mixed,
                imag_low: imag.label(a1),
                imag_high: imag.label(a2),
                real_low: real.label(b1),
                real_high: real.label(b2),
            })
        })
    }));
    squares.sort();

    let (req_prime, req_second) = required_isos(strata);
    let witnesses = |x: ProductCell, y: ProductCell, tits: Option<(FaceId, FaceId)>| match tits {
        Some((p, q)) => (real.label(p), real.label(q)),
        None => (strata.key(x).to_string(), strata.key(y).to_string()),
    };
    let central = strata.is_central();
    let mut m3_prime: Vec<IsoFailure> = req_prime
        .par_iter()
        .filter_map(|&(a, b1, b2)| {
            let m = d.dprime(a, b1, b2);
            if field.is_invertible(m) {
                return None;
            }
            let tits = central.then(|| (tits_product(real, a, b1).expect("central"), tits_product(real, a, b2).expect("central")));
            Some(IsoFailure {
                fixed: imag.label(a),
                low: real.label(b1),
                high: real.label(b2),
                witnesses: witnesses(ProductCell::new(a, b1), ProductCell::new(a, b2), tits),
                source_dim: m.cols(),
                target_dim: m.rows(),
                rank: field.rank(m),
            })
        })
        .collect();
    m3_prime.sort();
    let mut m3_second: Vec<IsoFailure> = req_second
        .par_iter()
        .filter_map(|&(a2, a1, b)| {
            let m = d.dsecond(a2, a1, b);
            if field.is_invertible(m) {
                return None;
            }
            let tits = central.then(|| (tits_product(real, b, a1).expect("central"), tits_product(real, b, a2).expect("central")));
            Some(IsoFailure {
                fixed: real.label(b),
                low: imag.label(a1),
                high: imag.label(a2),
                witnesses: witnesses(ProductCell::new(a1, b), ProductCell::new(a2, b), tits),
                source_dim: m.cols(),
                target_dim: m.rows(),
                rank: field.rank(m),
            })
        })
        .collect();
    m3_second.sort();

    let mut tits_key_mismatches = Vec::new();
    if central {
        for a in imag.ids() {
            for &(b1, b2) in &real_covers {
                let by_tits = tits_product(real, a, b1)? == tits_product(real, a, b2)?;
                let by_key = strata.same_stratum(ProductCell::new(a, b1), ProductCell::new(a, b2));
                if by_tits != by_key {
                    tits_key_mismatches.push(format!("dprime {}|{}->{}", imag.label(a), real.label(b1), real.label(b2)));
                }
            }
        }
        for b in real.ids() {
            for &(a1, a2) in &imag_covers {
                let by_tits = tits_product(real, b, a1)? == tits_product(real, b, a2)?;
                let by_key = strata.same_stratum(ProductCell::new(a1, b), ProductCell::new(a2, b));
                if by_tits != by_key {
                    tits_key_mismatches.push(format!("dsecond {}->{}|{}", imag.label(a2), imag.label(a1), real.label(b)));
                }
            }
        }
    }

    Ok(ValidationReport { squares, m3_prime, m3_second, tits_key_mismatches, required_isos: req_prime.len() + req_second.len() })
}

/// [`validate`] restricted to affine arrangements; invertibility is decided on stratum keys.
pub fn validate_affine(strata: &Strata, d: &MatrixDiagram) -> Result<ValidationReport, DiagramError> {
    if strata.is_central() {
        return Err(DiagramError::NotAffine);
    }
    validate(strata, d)
}

impl From<crate::arrangement::ArrangementError> for DiagramError {
    fn from(e: crate::arrangement::ArrangementError) -> Self {
        DiagramError::Internal(e.to_string())
    }
}

/// Pairs `x < z` with `dim z = dim x + 2` where the upward composites through different
/// middles disagree.
fn length_two_failures(poset: &FacePoset, field: FieldSpec, map: impl Fn(FaceId, FaceId) -> Matrix) -> Vec<(FaceId, FaceId)> {
    let mut out = Vec::new();
    for x in poset.ids() {
        let mut seen: BTreeMap<FaceId, Matrix> = BTreeMap::new();
        for &y in poset.upper_covers(x) {
            for &z in poset.upper_covers(y) {
                let path = field.mul(&map(y, z), &map(x, y)).expect("shapes");
                match seen.get(&z) {
                    Some(prev) if *prev != path => out.push((x, z)),
                    Some(_) => {}
                    None => {
                        seen.insert(z, path);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Same for maps running downward: `map(y, x)` goes from `y` to `x ⋖ y`.
fn length_two_failures_down(poset: &FacePoset, field: FieldSpec, map: impl Fn(FaceId, FaceId) -> Matrix) -> Vec<(FaceId, FaceId)> {
    let mut out = Vec::new();
    for x in poset.ids() {
        let mut seen: BTreeMap<FaceId, Matrix> = BTreeMap::new();
        for &y in poset.upper_covers(x) {
            for &z in poset.upper_covers(y) {
                let path = field.mul(&map(y, x), &map(z, y)).expect("shapes");
                match seen.get(&z) {
                    Some(prev) if *prev != path => out.push((x, z)),
                    Some(_) => {}
                    None => {
                        seen.insert(z, path);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
