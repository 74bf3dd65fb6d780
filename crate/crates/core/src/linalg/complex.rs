use std::collections::BTreeMap;

use super::field::FieldSpec;
use super::matrix::Matrix;
use super::LinalgError;

/// A bounded cochain complex `... -> C^i -> C^{i+1} -> ...` of finite-dimensional spaces.
///
/// Terms live in degrees `start .. start + dims.len()`; `diffs[k]` is the differential out of
/// degree `start + k`. Outside that range every term is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    start: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

/// Cohomology dimensions by degree. Only degrees inside the complex's range are listed.
pub type Cohomology = BTreeMap<i64, usize>;

impl ChainComplex {
    pub fn new(start: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, LinalgError> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return Err(LinalgError::ComplexShape {
                degree: start,
                detail: format!("{} terms need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), diffs.len()),
            });
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[k + 1], dims[k]) {
                return Err(LinalgError::ComplexShape {
                    degree: start + k as i64,
                    detail: format!("differential is {:?}, terms are {} -> {}", d.shape(), dims[k], dims[k + 1]),
                });
            }
        }
        Ok(ChainComplex { start, dims, diffs })
    }

    /// The complex with no nonzero terms.
    pub fn zero() -> Self {
        ChainComplex { start: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single space concentrated in one degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        ChainComplex { start: degree, dims: vec![dim], diffs: Vec::new() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last degree.
    pub fn end(&self) -> i64 {
        self.start + self.dims.len() as i64
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.start..self.end()
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < self.start || degree >= self.end() {
            0
        } else {
            self.dims[(degree - self.start) as usize]
        }
    }

    /// Differential `C^degree -> C^{degree+1}`, a zero matrix outside the stored range.
    pub fn differential(&self, degree: i64) -> Matrix {
        let k = degree - self.start;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            Matrix::zeros(self.dim(degree + 1), self.dim(degree))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| sign(i) * self.dim(i) as i64).sum()
    }

    /// First degree `i` with `d_{i+1} d_i != 0`, if any.
    pub fn d_squared_defect(&self, field: FieldSpec) -> Option<i64> {
        for k in 0..self.diffs.len().saturating_sub(1) {
            let prod = field.mul(&self.diffs[k + 1], &self.diffs[k]).expect("shapes checked in new");
            if !prod.is_zero() {
                return Some(self.start + k as i64);
            }
        }
        None
    }

    /// `dim H^i = dim ker d_i - rank d_{i-1}` for every degree in range.
    pub fn cohomology(&self, field: FieldSpec) -> Result<Cohomology, LinalgError> {
        if let Some(degree) = self.d_squared_defect(field) {
            return Err(LinalgError::DSquaredNonzero { degree });
        }
        let ranks: Vec<usize> = self.diffs.iter().map(|d| field.rank(d)).collect();
        let mut out = Cohomology::new();
        for (k, &dim) in self.dims.iter().enumerate() {
            let out_rank = ranks.get(k).copied().unwrap_or(0);
            let in_rank = if k > 0 { ranks[k - 1] } else { 0 };
            out.insert(self.start + k as i64, dim - out_rank - in_rank);
        }
        Ok(out)
    }

    pub fn is_acyclic(&self, field: FieldSpec) -> Result<bool, LinalgError> {
        Ok(self.cohomology(field)?.values().all(|&h| h == 0))
    }

    /// Builds a complex from summands `(degree, dim)`. `out(i)` lists the nonzero blocks
    /// `summand i -> summand j`; every target must sit one degree higher.
    pub fn assemble<F>(summands: &[(i64, usize)], out: F) -> Result<(Self, SummandLayout), LinalgError>
    where
        F: Fn(usize) -> Vec<(usize, Matrix)>,
    {
        let layout = SummandLayout::new(summands);
        let (start, end) = (layout.start, layout.end);
        let dims: Vec<usize> = (start..end).map(|d| layout.dim(d)).collect();
        let mut diffs: Vec<Matrix> = (start..end - 1).map(|d| Matrix::zeros(layout.dim(d + 1), layout.dim(d))).collect();
        for (i, &(deg, dim)) in summands.iter().enumerate() {
            for (j, block) in out(i) {
                let (tdeg, tdim) = summands[j];
                if tdeg != deg + 1 || block.shape() != (tdim, dim) {
                    return Err(LinalgError::ComplexShape {
                        degree: deg,
                        detail: format!("block {i} -> {j} has shape {:?}, expected {:?}", block.shape(), (tdim, dim)),
                    });
                }
                diffs[(deg - start) as usize].put_block(layout.offset[j], layout.offset[i], &block);
            }
        }
        Ok((ChainComplex { start, dims, diffs }, layout))
    }
}

/// Where each summand of an assembled complex sits inside its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandLayout {
    start: i64,
    end: i64,
    degree_dims: Vec<usize>,
    /// Offset of each summand inside its degree.
    pub offset: Vec<usize>,
}

impl SummandLayout {
    fn new(summands: &[(i64, usize)]) -> Self {
        let start = summands.iter().map(|s| s.0).min().unwrap_or(0);
        let end = summands.iter().map(|s| s.0 + 1).max().unwrap_or(0);
        let mut degree_dims = vec![0; (end - start) as usize];
        let mut offset = Vec::with_capacity(summands.len());
        for &(deg, dim) in summands {
            let slot = &mut degree_dims[(deg - start) as usize];
            offset.push(*slot);
            *slot += dim;
        }
        SummandLayout { start, end, degree_dims, offset }
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < self.start || degree >= self.end {
            0
        } else {
            self.degree_dims[(degree - self.start) as usize]
        }
    }
}

pub(crate) fn sign(degree: i64) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Nonzero cohomology only, for compact reporting.
pub fn nonzero(h: &Cohomology) -> Cohomology {
    h.iter().filter(|(_, &v)| v != 0).map(|(&k, &v)| (k, v)).collect()
}

/// A degree-preserving map between two complexes; components keyed by degree, missing
/// components are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn component(&self, degree: i64, source: &ChainComplex, target: &ChainComplex) -> Matrix {
        self.components
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(target.dim(degree), source.dim(degree)))
    }

    /// First degree where `f d != d f`, if any.
    pub fn commutation_defect(&self, field: FieldSpec, source: &ChainComplex, target: &ChainComplex) -> Option<i64> {
        let lo = source.start().min(target.start()) - 1;
        let hi = source.end().max(target.end());
        for i in lo..hi {
            let left = field.mul(&self.component(i + 1, source, target), &source.differential(i)).ok()?;
            let right = field.mul(&target.differential(i), &self.component(i, source, target)).ok()?;
            if left != right {
                return Some(i);
            }
        }
        None
    }

    /// Mapping cone: degree `i` is `X^{i+1} ⊕ Y^i` with `d(x, y) = (-dx, f x + dy)`.
    pub fn cone(&self, source: &ChainComplex, target: &ChainComplex) -> ChainComplex {
        let lo = (source.start() - 1).min(target.start());
        let hi = (source.end() - 1).max(target.end());
        let lo = lo.min(hi);
        let dims: Vec<usize> = (lo..hi).map(|i| source.dim(i + 1) + target.dim(i)).collect();
        let mut diffs = Vec::new();
        for i in lo..hi - 1 {
            let (sx, sy) = (source.dim(i + 1), target.dim(i));
            let (tx, ty) = (source.dim(i + 2), target.dim(i + 1));
            let mut d = Matrix::zeros(tx + ty, sx + sy);
            let dx = source.differential(i + 1);
            for r in 0..tx {
                for c in 0..sx {
                    d.set(r, c, -dx.get(r, c).clone());
                }
            }
            d.put_block(tx, 0, &self.component(i + 1, source, target));
            d.put_block(tx, sx, &target.differential(i));
            diffs.push(d);
        }
        ChainComplex { start: lo, dims, diffs }
    }

    /// Whether the induced map on cohomology is an isomorphism in every degree, decided by
    /// acyclicity of the mapping cone.
    pub fn is_quasi_isomorphism(&self, field: FieldSpec, source: &ChainComplex, target: &ChainComplex) -> Result<bool, LinalgError> {
        let cone = self.cone(source, target);
        // Negation over F_p must stay canonical.
        let cone = ChainComplex {
            start: cone.start,
            dims: cone.dims,
            diffs: cone.diffs.iter().map(|d| field.normalize_matrix(d)).collect::<Result<_, _>>()?,
        };
        cone.is_acyclic(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn identity_complex_is_acyclic() {
        let c = ChainComplex::new(0, vec![1, 1], vec![Matrix::identity(1)]).unwrap();
        assert_eq!(c.cohomology(Q).unwrap(), Cohomology::from([(0, 0), (1, 0)]));
    }

    #[test]
    fn zero_differential_keeps_both_terms() {
        let c = ChainComplex::new(0, vec![1, 1], vec![Matrix::zeros(1, 1)]).unwrap();
        assert_eq!(c.cohomology(Q).unwrap(), Cohomology::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn line_fan_cochains() {
        // k -> k^2 with the two incidence signs of the origin in the line.
        let c = ChainComplex::new(0, vec![1, 2], vec![Matrix::from_i64(2, 1, &[1, -1])]).unwrap();
        assert_eq!(c.cohomology(Q).unwrap(), Cohomology::from([(0, 0), (1, 1)]));
        assert_eq!(c.euler_characteristic(), -1);
    }

    #[test]
    fn detects_d_squared() {
        let c = ChainComplex::new(3, vec![1, 1, 1], vec![Matrix::identity(1), Matrix::identity(1)]).unwrap();
        assert_eq!(c.d_squared_defect(Q), Some(3));
        assert!(matches!(c.cohomology(Q), Err(LinalgError::DSquaredNonzero { degree: 3 })));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ChainComplex::new(0, vec![1, 2], vec![Matrix::zeros(1, 2)]).is_err());
        assert!(ChainComplex::new(0, vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn assembles_blocks_by_degree() {
        // summands: a (deg 0, dim 1), b (deg 1, dim 1), c (deg 1, dim 2)
        let summands = [(0, 1), (1, 1), (1, 2)];
        let (c, layout) = ChainComplex::assemble(&summands, |i| match i {
            0 => vec![(1, Matrix::identity(1)), (2, Matrix::from_i64(2, 1, &[3, 4]))],
            _ => vec![],
        })
        .unwrap();
        assert_eq!(layout.offset, vec![0, 0, 1]);
        assert_eq!(c.differential(0), Matrix::from_i64(3, 1, &[1, 3, 4]));
        assert_eq!(c.cohomology(Q).unwrap(), Cohomology::from([(0, 0), (1, 2)]));
        assert!(ChainComplex::assemble(&summands, |i| if i == 0 { vec![(1, Matrix::identity(2))] } else { vec![] }).is_err());
        let (empty, _) = ChainComplex::assemble(&[], |_| vec![]).unwrap();
        assert_eq!(empty.total_dim(), 0);
    }

    #[test]
    fn quasi_isomorphism_via_cone() {
        let x = ChainComplex::concentrated(0, 1);
        let y = ChainComplex::new(0, vec![2, 1], vec![Matrix::from_i64(1, 2, &[1, 1])]).unwrap();
        let mut f = ChainMap::default();
        f.components.insert(0, Matrix::from_i64(2, 1, &[1, -1]));
        assert_eq!(f.commutation_defect(Q, &x, &y), None);
        assert!(f.is_quasi_isomorphism(Q, &x, &y).unwrap());
        let mut g = ChainMap::default();
        g.components.insert(0, Matrix::from_i64(2, 1, &[1, 0]));
        assert_eq!(g.commutation_defect(Q, &x, &y), Some(0));
        let mut z = ChainMap::default();
        z.components.insert(0, Matrix::zeros(2, 1));
        assert!(!z.is_quasi_isomorphism(Q, &x, &y).unwrap());
    }
}
