//! Product cells `iA + B` of `C^n` and the stratifications they refine.
//!
//! A cell is the set of `x + iy` with real part `x` in the face `B` and imaginary part `y` in
//! the face `A`. In affine mode `A` is a face of the linearized arrangement. Everything is
//! decided on sign vectors; strata are never built as point sets.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{enumerate_faces, Arrangement, ArrangementError, FaceId, FacePoset, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("operation requires a central arrangement")]
    NotCentral,
    #[error("face {lower} is not below face {upper}")]
    NotBelow { lower: String, upper: String },
}

/// The cell `iA + B`: imaginary part in `imag`, real part in `real`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductCell {
    pub imag: FaceId,
    pub real: FaceId,
}

impl ProductCell {
    pub fn new(imag: FaceId, real: FaceId) -> Self {
        ProductCell { imag, real }
    }
}

/// The hyperplanes whose complexification contains a cell. Two cells lie in the same
/// complex stratum iff their keys agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StratumKey(pub Vec<usize>);

impl fmt::Display for StratumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|h| format!("H{h}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Real and imaginary face posets of an arrangement with the product-cell combinatorics.
#[derive(Clone, Debug)]
pub struct Strata {
    arrangement: Arrangement,
    linear: Arrangement,
    real: FacePoset,
    imag: FacePoset,
    linear_index: Vec<usize>,
}

impl Strata {
    pub fn new(arrangement: Arrangement, budget: usize) -> Result<Self, StrataError> {
        let real = enumerate_faces(&arrangement, budget)?;
        let (linear, imag, linear_index) = if arrangement.is_central() {
            (arrangement.clone(), real.clone(), (0..arrangement.len()).collect())
        } else {
            let lin = arrangement.linearization();
            let imag = enumerate_faces(&lin.arrangement, budget)?;
            (lin.arrangement, imag, lin.index)
        };
        Ok(Strata { arrangement, linear, real, imag, linear_index })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    /// The central arrangement whose faces index the imaginary parts.
    pub fn linear(&self) -> &Arrangement {
        &self.linear
    }

    pub fn is_central(&self) -> bool {
        self.arrangement.is_central()
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim()
    }

    /// Faces of the arrangement; the `B` of `iA + B`.
    pub fn real(&self) -> &FacePoset {
        &self.real
    }

    /// Faces of the linearization; the `A` of `iA + B`. Equal to [`Strata::real`] when central.
    pub fn imag(&self) -> &FacePoset {
        &self.imag
    }

    /// Index of the linear part of each hyperplane in the imaginary arrangement.
    pub fn linear_index(&self) -> &[usize] {
        &self.linear_index
    }

    /// All cells, imaginary face major.
    pub fn cells(&self) -> Vec<ProductCell> {
        self.imag.ids().flat_map(|a| self.real.ids().map(move |b| ProductCell::new(a, b))).collect()
    }

    pub fn key(&self, cell: ProductCell) -> StratumKey {
        let real = self.real.signs(cell.real);
        let imag = self.imag.signs(cell.imag);
        StratumKey(
            (0..self.arrangement.len())
                .filter(|&h| real[h].is_zero() && imag[self.linear_index[h]].is_zero())
                .collect(),
        )
    }

    /// Complex codimension of the stratum.
    pub fn codim(&self, key: &StratumKey) -> usize {
        self.arrangement.rank_of(&key.0)
    }

    pub fn same_stratum(&self, c1: ProductCell, c2: ProductCell) -> bool {
        self.key(c1) == self.key(c2)
    }

    /// Distinct stratum keys, sorted.
    pub fn keys(&self) -> Vec<StratumKey> {
        let mut keys: Vec<StratumKey> = self.cells().into_iter().map(|c| self.key(c)).collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// `"B|D"` with the real face first.
    pub fn cell_label(&self, cell: ProductCell) -> String {
        format!("{}|{}", self.real.label(cell.real), self.imag.label(cell.imag))
    }

    /// Classes of real faces at fixed imaginary face `c`: the equivalence closure of
    /// `B1 ≤ B2` with `key(iC + B1) = key(iC + B2)`. Sorted by smallest member.
    pub fn s1_classes(&self, c: FaceId) -> Vec<Vec<FaceId>> {
        let mut parent: Vec<usize> = (0..self.real.len()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (b1, b2) in self.real.covers() {
            if self.key(ProductCell::new(c, b1)) == self.key(ProductCell::new(c, b2)) {
                let (r1, r2) = (root(&mut parent, b1.0), root(&mut parent, b2.0));
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
        let mut classes: BTreeMap<usize, Vec<FaceId>> = BTreeMap::new();
        for b in self.real.ids() {
            let r = root(&mut parent, b.0);
            classes.entry(r).or_default().push(b);
        }
        classes.into_values().collect()
    }

    /// Whether `x` lies in the class of `d` at imaginary face `c`, decided by signs on the
    /// hyperplanes containing `c`.
    pub fn s1_membership_direct(&self, c: FaceId, d: FaceId, x: FaceId) -> Result<bool, StrataError> {
        if !self.is_central() {
            return Err(StrataError::NotCentral);
        }
        if !self.real.leq(c, d) {
            return Err(StrataError::NotBelow { lower: self.real.label(c), upper: self.real.label(d) });
        }
        let (cs, ds, xs) = (self.real.signs(c), self.real.signs(d), self.real.signs(x));
        Ok((0..cs.len()).all(|h| !cs[h].is_zero() || ds[h] == xs[h]))
    }

    /// The partition of real faces by their signs on the hyperplanes containing `c`.
    pub fn s1_partition_direct(&self, c: FaceId) -> Result<Vec<Vec<FaceId>>, StrataError> {
        if !self.is_central() {
            return Err(StrataError::NotCentral);
        }
        let zeros = self.real.zero_set(c);
        let mut groups: BTreeMap<Vec<Sign>, Vec<FaceId>> = BTreeMap::new();
        for b in self.real.ids() {
            let signs = self.real.signs(b);
            groups.entry(zeros.iter().map(|&h| signs[h]).collect()).or_default().push(b);
        }
        let mut out: Vec<Vec<FaceId>> = groups.into_values().collect();
        out.sort();
        Ok(out)
    }

    /// The swap `x + iy ↦ y + ix`.
    pub fn tau(&self, cell: ProductCell) -> Result<ProductCell, StrataError> {
        if !self.is_central() {
            return Err(StrataError::NotCentral);
        }
        Ok(ProductCell::new(cell.real, cell.imag))
    }
}
