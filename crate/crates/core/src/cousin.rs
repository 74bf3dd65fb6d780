//! The Cousin complex of a matrix diagram and the perversity checks.
//!
//! The complex has one cellular sheaf per imaginary face `A`, placed in degree
//! `codim A = n - dim A`. Its stalk at the product cell `iD + B` is `E_{A,B}` when `D ≤ A`
//! and zero otherwise. The differential `A2 -> A1` (for `A1 ⋖ A2`) is `ψ(A1 ⋖ A2) ∂″`.
//!
//! The stalk complex at `iD + B` is therefore `⊕_{A ≥ D} E_{A,B}`. Real covers `B1 ⋖ B2` act
//! by `∂′` blockwise; imaginary covers `D1 ⋖ D2` act by dropping the summands with
//! `A ≱ D2`.
//!
//! Degrees are normalized so that a diagram which is constant on the open stratum has its
//! stalk cohomology there in degree 0. With this normalization a point-supported diagram at
//! the origin of `C` has compactly supported cohomology in degree 1.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::FaceId;
use crate::diagram::{validate, DiagramError, MatrixDiagram, ValidationReport};
use crate::fan::Orientation;
use crate::linalg::{nonzero, ChainComplex, ChainMap, Cohomology, FieldSpec, Matrix, SummandLayout};
use crate::strata::{ProductCell, Strata};

/// Stalk complex of the Cousin complex at one product cell.
#[derive(Clone, Debug)]
pub struct Stalk {
    pub cell: ProductCell,
    /// The imaginary faces `A ≥ D`, in face order.
    pub summands: Vec<FaceId>,
    pub complex: ChainComplex,
    layout: SummandLayout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Real,
    Imag,
}

/// An induced map between stalk complexes of two cells in the same stratum which is not a
/// quasi-isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConstructibilityFailure {
    pub direction: Direction,
    pub from: String,
    pub to: String,
    pub key: String,
    pub reason: String,
}

/// Nonzero stalk cohomology at a cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SupportEntry {
    pub degree: i64,
    pub cell: String,
    pub key: String,
    pub codim: usize,
    pub dim: usize,
}

/// Nonzero costalk cohomology below the allowed degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CostalkViolation {
    pub cell: String,
    pub degree: i64,
    pub dim: usize,
    /// Costalk cohomology must vanish below this degree.
    pub bound: i64,
    pub codim: usize,
}

pub struct CousinComplex<'a> {
    strata: &'a Strata,
    diagram: &'a MatrixDiagram,
    imag_orient: Orientation,
    real_orient: Orientation,
    stalks: Vec<Stalk>,
    defects: Vec<String>,
}

fn sign(k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Builds every stalk complex and records `d² ≠ 0` and non-commuting real maps as defects.
pub fn build_cousin<'a>(strata: &'a Strata, diagram: &'a MatrixDiagram) -> Result<CousinComplex<'a>, DiagramError> {
    if !diagram.fits(strata) {
        return Err(DiagramError::WrongSize("diagram does not match the arrangement".into()));
    }
    let imag_orient = Orientation::new(strata.linear(), strata.imag());
    let real_orient = Orientation::new(strata.arrangement(), strata.real());
    let cells: Vec<ProductCell> = strata.cells();
    let stalks: Vec<Stalk> = cells
        .par_iter()
        .map(|&cell| stalk_complex(strata, diagram, &imag_orient, cell))
        .collect::<Result<_, _>>()?;
    let mut cousin = CousinComplex { strata, diagram, imag_orient, real_orient, stalks, defects: Vec::new() };
    let field = diagram.field();
    let mut defects: Vec<String> = cousin
        .stalks
        .par_iter()
        .filter_map(|s| s.complex.d_squared_defect(field).map(|deg| format!("d^2 != 0 at {} out of degree {deg}", strata.cell_label(s.cell))))
        .collect();
    let real_covers = strata.real().covers();
    defects.par_extend(strata.imag().ids().collect::<Vec<_>>().par_iter().flat_map_iter(|&d| {
        let cousin = &cousin;
        real_covers.iter().filter_map(move |&(b1, b2)| {
            let (src, tgt) = (cousin.stalk(ProductCell::new(d, b1)), cousin.stalk(ProductCell::new(d, b2)));
            cousin
                .real_map(d, b1, b2)
                .commutation_defect(field, &src.complex, &tgt.complex)
                .map(|deg| format!("real map {} -> {} is not a chain map at degree {deg}", strata.cell_label(src.cell), strata.cell_label(tgt.cell)))
        })
    }));
    defects.sort();
    cousin.defects = defects;
    Ok(cousin)
}

fn stalk_complex(strata: &Strata, d: &MatrixDiagram, orient: &Orientation, cell: ProductCell) -> Result<Stalk, DiagramError> {
    let imag = strata.imag();
    let n = strata.dim() as i64;
    let summands = imag.faces_above(cell.imag);
    let pos: HashMap<FaceId, usize> = summands.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let graded: Vec<(i64, usize)> = summands.iter().map(|&a| (n - imag.dim(a) as i64, d.dim(a, cell.real))).collect();
    let field = d.field();
    let (complex, layout) = ChainComplex::assemble(&graded, |i| {
        let a2 = summands[i];
        imag.lower_covers(a2)
            .iter()
            .filter_map(|a1| pos.get(a1).map(|&j| (j, field.signed(d.dsecond(a2, *a1, cell.real), orient.psi(*a1, a2)))))
            .collect()
    })?;
    Ok(Stalk { cell, summands, complex, layout })
}

impl<'a> CousinComplex<'a> {
    pub fn strata(&self) -> &Strata {
        self.strata
    }

    pub fn field(&self) -> FieldSpec {
        self.diagram.field()
    }

    pub fn stalk(&self, cell: ProductCell) -> &Stalk {
        &self.stalks[cell.imag.0 * self.strata.real().len() + cell.real.0]
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.stalks
    }

    /// `d² ≠ 0` in a stalk complex, or a real-direction map that is not a chain map.
    pub fn defects(&self) -> &[String] {
        &self.defects
    }

    pub fn imag_orientation(&self) -> &Orientation {
        &self.imag_orient
    }

    pub fn real_orientation(&self) -> &Orientation {
        &self.real_orient
    }

    /// Blockwise `∂′_{A|B1,B2}` from the stalk at `iD + B1` to the stalk at `iD + B2`.
    pub fn real_map(&self, d: FaceId, b1: FaceId, b2: FaceId) -> ChainMap {
        let (src, tgt) = (self.stalk(ProductCell::new(d, b1)), self.stalk(ProductCell::new(d, b2)));
        let n = self.strata.dim() as i64;
        let imag = self.strata.imag();
        let mut map = ChainMap::default();
        for deg in src.complex.degrees().chain(tgt.complex.degrees()) {
            map.components.entry(deg).or_insert_with(|| Matrix::zeros(tgt.complex.dim(deg), src.complex.dim(deg)));
        }
        for (i, &a) in src.summands.iter().enumerate() {
            let deg = n - imag.dim(a) as i64;
            let block = self.diagram.dprime(a, b1, b2);
            map.components.get_mut(&deg).expect("degree present").put_block(tgt.layout.offset[i], src.layout.offset[i], block);
        }
        map
    }

    /// Projection from the stalk at `iD1 + B` onto the summands `A ≥ D2` of the stalk at
    /// `iD2 + B`.
    pub fn imag_map(&self, b: FaceId, d1: FaceId, d2: FaceId) -> ChainMap {
        let (src, tgt) = (self.stalk(ProductCell::new(d1, b)), self.stalk(ProductCell::new(d2, b)));
        let n = self.strata.dim() as i64;
        let imag = self.strata.imag();
        let mut map = ChainMap::default();
        for deg in src.complex.degrees().chain(tgt.complex.degrees()) {
            map.components.entry(deg).or_insert_with(|| Matrix::zeros(tgt.complex.dim(deg), src.complex.dim(deg)));
        }
        for (j, &a) in tgt.summands.iter().enumerate() {
            let i = src.summands.iter().position(|&x| x == a).expect("A ≥ D2 implies A ≥ D1");
            let deg = n - imag.dim(a) as i64;
            let k = self.diagram.dim(a, b);
            map.components.get_mut(&deg).expect("degree present").put_block(tgt.layout.offset[j], src.layout.offset[i], &Matrix::identity(k));
        }
        map
    }

    pub fn stalk_cohomology(&self, cell: ProductCell) -> Result<Cohomology, DiagramError> {
        Ok(self.stalk(cell).complex.cohomology(self.field())?)
    }

    /// Induced maps between same-stratum neighbours that are not quasi-isomorphisms.
    pub fn constructibility_failures(&self) -> Vec<ConstructibilityFailure> {
        let s = self.strata;
        let field = self.field();
        let check = |direction: Direction, map: ChainMap, from: ProductCell, to: ProductCell| -> Option<ConstructibilityFailure> {
            let (src, tgt) = (&self.stalk(from).complex, &self.stalk(to).complex);
            let reason = if let Some(deg) = map.commutation_defect(field, src, tgt) {
                format!("not a chain map at degree {deg}")
            } else {
                match map.is_quasi_isomorphism(field, src, tgt) {
                    Ok(true) => return None,
                    Ok(false) => "not a quasi-isomorphism".to_string(),
                    Err(e) => e.to_string(),
                }
            };
            Some(ConstructibilityFailure { direction, from: s.cell_label(from), to: s.cell_label(to), key: s.key(from).to_string(), reason })
        };
        let real_covers = s.real().covers();
        let imag_covers = s.imag().covers();
        let mut out: Vec<ConstructibilityFailure> = s
            .imag()
            .ids()
            .collect::<Vec<_>>()
            .par_iter()
            .flat_map_iter(|&d| {
                real_covers.iter().filter_map(move |&(b1, b2)| {
                    let (from, to) = (ProductCell::new(d, b1), ProductCell::new(d, b2));
                    if !s.same_stratum(from, to) {
                        return None;
                    }
                    check(Direction::Real, self.real_map(d, b1, b2), from, to)
                })
            })
            .collect();
        out.par_extend(s.real().ids().collect::<Vec<_>>().par_iter().flat_map_iter(|&b| {
            imag_covers.iter().filter_map(move |&(d1, d2)| {
                let (from, to) = (ProductCell::new(d1, b), ProductCell::new(d2, b));
                if !s.same_stratum(from, to) {
                    return None;
                }
                check(Direction::Imag, self.imag_map(b, d1, d2), from, to)
            })
        }));
        out.sort();
        out
    }

    /// Nonzero stalk cohomology at every cell; cells with `d² ≠ 0` are skipped.
    pub fn support(&self) -> Vec<SupportEntry> {
        let s = self.strata;
        let mut out: Vec<SupportEntry> = self
            .stalks
            .par_iter()
            .flat_map_iter(|st| {
                let key = s.key(st.cell);
                let codim = s.codim(&key);
                let h = st.complex.cohomology(self.field()).map(|h| nonzero(&h)).unwrap_or_default();
                let label = s.cell_label(st.cell);
                h.into_iter().map(move |(degree, dim)| SupportEntry { degree, cell: label.clone(), key: key.to_string(), codim, dim })
            })
            .collect();
        out.sort();
        out
    }

    /// Stalk cohomology in degree `p` at a cell whose stratum has complex codimension `< p`.
    pub fn p_minus_violations(&self) -> Vec<SupportEntry> {
        self.support().into_iter().filter(|e| (e.codim as i64) < e.degree).collect()
    }

    /// The complex over the star of the cell `iD0 + B0`: blocks `E_{A,B}` for `B ≥ B0`,
    /// `D0 ≤ D ≤ A`, in degree `codim A + (dim B - dim B0) + (dim D - dim D0)`.
    pub fn costalk_complex(&self, cell: ProductCell) -> Result<ChainComplex, DiagramError> {
        let real = self.strata.real();
        let imag = self.strata.imag();
        let bs = real.faces_above(cell.real);
        let ds = imag.faces_above(cell.imag);
        let base = (real.dim(cell.real) + imag.dim(cell.imag)) as i64;
        self.total_complex(&bs, &ds, base)
    }

    /// Cochains with compact support of the whole complex: all blocks, in degree
    /// `codim A + dim B + dim D`.
    pub fn compact_complex(&self) -> Result<ChainComplex, DiagramError> {
        let bs: Vec<FaceId> = self.strata.real().ids().collect();
        let ds: Vec<FaceId> = self.strata.imag().ids().collect();
        self.total_complex(&bs, &ds, 0)
    }

    fn total_complex(&self, bs: &[FaceId], ds: &[FaceId], base: i64) -> Result<ChainComplex, DiagramError> {
        let (real, imag) = (self.strata.real(), self.strata.imag());
        let n = self.strata.dim() as i64;
        let d = self.diagram;
        let field = self.field();
        let mut blocks: Vec<(FaceId, FaceId, FaceId)> = Vec::new();
        for &dd in ds {
            for a in imag.faces_above(dd) {
                for &b in bs {
                    if d.dim(a, b) > 0 {
                        blocks.push((a, b, dd));
                    }
                }
            }
        }
        let index: HashMap<(FaceId, FaceId, FaceId), usize> = blocks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let codim = |a: FaceId| n - imag.dim(a) as i64;
        let summands: Vec<(i64, usize)> = blocks
            .iter()
            .map(|&(a, b, dd)| (codim(a) + real.dim(b) as i64 + imag.dim(dd) as i64 - base, d.dim(a, b)))
            .collect();
        let (complex, _) = ChainComplex::assemble(&summands, |i| {
            let (a, b, dd) = blocks[i];
            let c = codim(a);
            let mut out = Vec::new();
            for &a1 in imag.lower_covers(a) {
                if let Some(&j) = index.get(&(a1, b, dd)) {
                    out.push((j, field.signed(d.dsecond(a, a1, b), self.imag_orient.psi(a1, a))));
                }
            }
            for &b2 in real.upper_covers(b) {
                if let Some(&j) = index.get(&(a, b2, dd)) {
                    out.push((j, field.signed(d.dprime(a, b, b2), sign(c) * self.real_orient.psi(b, b2))));
                }
            }
            for &d2 in imag.upper_covers(dd) {
                if let Some(&j) = index.get(&(a, b, d2)) {
                    let s = sign(c) * sign(real.dim(b) as i64) * self.imag_orient.psi(dd, d2);
                    out.push((j, field.signed(&Matrix::identity(d.dim(a, b)), s)));
                }
            }
            out
        })?;
        Ok(complex)
    }

    /// Cells whose costalk cohomology is nonzero below degree `2n - p - dim σ`, where `p`
    /// is the complex codimension of the stratum and `σ` the cell.
    pub fn p_plus_costalk_violations(&self) -> Result<Vec<CostalkViolation>, DiagramError> {
        let s = self.strata;
        let n = s.dim() as i64;
        let field = self.field();
        let cells = s.cells();
        let mut out: Vec<CostalkViolation> = cells
            .par_iter()
            .map(|&cell| -> Result<Vec<CostalkViolation>, DiagramError> {
                let codim = s.codim(&s.key(cell));
                let dim_cell = (s.real().dim(cell.real) + s.imag().dim(cell.imag)) as i64;
                let bound = 2 * n - codim as i64 - dim_cell;
                let h = self.costalk_complex(cell)?.cohomology(field)?;
                Ok(nonzero(&h)
                    .into_iter()
                    .filter(|&(deg, _)| deg < bound)
                    .map(|(degree, dim)| CostalkViolation { cell: s.cell_label(cell), degree, dim, bound, codim })
                    .collect())
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect();
        out.sort();
        Ok(out)
    }

    /// `Σ_cells (-1)^{dim cell} χ(stalk complex)`.
    pub fn stalk_euler_sum(&self) -> i64 {
        let s = self.strata;
        self.stalks
            .iter()
            .map(|st| sign((s.real().dim(st.cell.real) + s.imag().dim(st.cell.imag)) as i64) as i64 * st.complex.euler_characteristic())
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// The matrix diagram axioms hold.
    pub well_formed: bool,
    pub constructible: bool,
    pub p_minus: bool,
    pub p_plus: bool,
    /// All of the above.
    pub perverse: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerversityReport {
    pub verdicts: Verdicts,
    pub validation: ValidationReport,
    pub defects: Vec<String>,
    pub constructibility_failures: Vec<ConstructibilityFailure>,
    /// Nonzero stalk cohomology, by cell.
    pub support: Vec<SupportEntry>,
    pub p_minus_violations: Vec<SupportEntry>,
    /// Central mode: violations of the support condition for the dual diagram, with cells
    /// swapped back. Empty in affine mode.
    pub p_plus_dual_violations: Vec<SupportEntry>,
    /// Violations of the costalk vanishing condition.
    pub p_plus_costalk_violations: Vec<CostalkViolation>,
}

fn swap_label(label: &str) -> String {
    match label.split_once('|') {
        Some((x, y)) => format!("{y}|{x}"),
        None => label.to_string(),
    }
}

/// Runs validation, builds the Cousin complex and evaluates constructibility, (P−) and (P+).
///
/// (P+) is decided by costalk vanishing. In central mode it is also decided as (P−) of the
/// dual diagram, and both routes must agree.
pub fn perversity_report(strata: &Strata, d: &MatrixDiagram) -> Result<PerversityReport, DiagramError> {
    let validation = validate(strata, d)?;
    let cousin = build_cousin(strata, d)?;
    let mut defects = cousin.defects().to_vec();
    let constructibility_failures = cousin.constructibility_failures();
    let support = cousin.support();
    let p_minus_violations: Vec<SupportEntry> = support.iter().filter(|e| (e.codim as i64) < e.degree).cloned().collect();
    let p_plus_costalk_violations = if defects.is_empty() { cousin.p_plus_costalk_violations()? } else { Vec::new() };
    let mut p_plus = defects.is_empty() && p_plus_costalk_violations.is_empty();
    let mut p_plus_dual_violations = Vec::new();
    if strata.is_central() {
        let dual = d.dualize(strata)?;
        let dual_cousin = build_cousin(strata, &dual)?;
        defects.extend(dual_cousin.defects().iter().map(|x| format!("dual: {x}")));
        p_plus_dual_violations = dual_cousin
            .p_minus_violations()
            .into_iter()
            .map(|e| SupportEntry { cell: swap_label(&e.cell), ..e })
            .collect();
        p_plus_dual_violations.sort();
        let by_dual = dual_cousin.defects().is_empty() && p_plus_dual_violations.is_empty();
        if constructibility_failures.is_empty() && by_dual != p_plus {
            defects.push(format!("(P+) routes disagree: dual says {by_dual}, costalks say {p_plus}"));
        }
        p_plus = p_plus && by_dual;
    }
    let well_formed = validation.passes();
    let constructible = cousin.defects().is_empty() && constructibility_failures.is_empty();
    let p_minus = cousin.defects().is_empty() && p_minus_violations.is_empty();
    let verdicts = Verdicts { well_formed, constructible, p_minus, p_plus, perverse: well_formed && constructible && p_minus && p_plus };
    Ok(PerversityReport {
        verdicts,
        validation,
        defects,
        constructibility_failures,
        support,
        p_minus_violations,
        p_plus_dual_violations,
        p_plus_costalk_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactReport {
    pub cohomology: Cohomology,
    pub euler_characteristic: i64,
    /// `Σ_cells (-1)^{dim cell} χ(stalk)`; equals the Euler characteristic.
    pub stalk_euler_sum: i64,
}

/// Compactly supported cohomology of the Cousin complex on `C^n`.
pub fn compact_cohomology(strata: &Strata, d: &MatrixDiagram) -> Result<CompactReport, DiagramError> {
    let cousin = build_cousin(strata, d)?;
    let complex = cousin.compact_complex()?;
    let h = nonzero(&complex.cohomology(d.field())?);
    let euler_characteristic = h.iter().map(|(&k, &v)| sign(k) as i64 * v as i64).sum();
    Ok(CompactReport { cohomology: h, euler_characteristic, stalk_euler_sum: cousin.stalk_euler_sum() })
}
