use std::collections::BTreeMap;

use serde::Serialize;

use super::{DiagramError, MatrixDiagram};
use crate::arrangement::FaceId;
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::strata::Strata;

/// A family of linear maps `f_{A,B}: E_{A,B} -> F_{A,B}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMorphism {
    field: FieldSpec,
    real_len: usize,
    components: Vec<Matrix>,
}

/// A cover map with which the morphism fails to commute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MorphismFailure {
    pub map: String,
}

fn same_shape(source: &MatrixDiagram, target: &MatrixDiagram) -> Result<(), DiagramError> {
    if source.field != target.field {
        return Err(DiagramError::FieldMismatch);
    }
    if source.imag_len != target.imag_len || source.real_len != target.real_len {
        return Err(DiagramError::WrongSize("source and target live over different arrangements".into()));
    }
    Ok(())
}

impl DiagramMorphism {
    /// Missing components are zero.
    pub fn new(source: &MatrixDiagram, target: &MatrixDiagram, components: BTreeMap<(FaceId, FaceId), Matrix>) -> Result<Self, DiagramError> {
        same_shape(source, target)?;
        let n = source.real_len;
        let mut comps = Vec::with_capacity(source.dims.len());
        let mut errors = Vec::new();
        for i in 0..source.dims.len() {
            let (a, b) = (FaceId(i / n), FaceId(i % n));
            let expected = (target.dims[i], source.dims[i]);
            let m = components.get(&(a, b)).cloned().unwrap_or_else(|| Matrix::zeros(expected.0, expected.1));
            if m.shape() != expected {
                errors.push(format!("component ({a}, {b}) is {:?}, expected {expected:?}", m.shape()));
            }
            comps.push(source.field.normalize_matrix(&m)?);
        }
        for &(a, b) in components.keys() {
            if a.0 >= source.imag_len || b.0 >= n {
                errors.push(format!("component ({a}, {b}) out of range"));
            }
        }
        if !errors.is_empty() {
            return Err(DiagramError::Shape(errors));
        }
        Ok(DiagramMorphism { field: source.field, real_len: n, components: comps })
    }

    pub fn from_fn(source: &MatrixDiagram, target: &MatrixDiagram, f: impl Fn(FaceId, FaceId) -> Matrix) -> Result<Self, DiagramError> {
        let n = source.real_len;
        let comps = (0..source.dims.len()).map(|i| ((FaceId(i / n), FaceId(i % n)), f(FaceId(i / n), FaceId(i % n)))).collect();
        DiagramMorphism::new(source, target, comps)
    }

    pub fn identity(d: &MatrixDiagram) -> Self {
        DiagramMorphism { field: d.field, real_len: d.real_len, components: d.dims.iter().map(|&k| Matrix::identity(k)).collect() }
    }

    pub fn zero(source: &MatrixDiagram, target: &MatrixDiagram) -> Result<Self, DiagramError> {
        DiagramMorphism::new(source, target, BTreeMap::new())
    }

    pub fn component(&self, a: FaceId, b: FaceId) -> &Matrix {
        &self.components[a.0 * self.real_len + b.0]
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DiagramMorphism {
            field: self.field,
            real_len: self.real_len,
            components: self.components.iter().map(|m| self.field.scale(m, c)).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DiagramMorphism) -> Result<Self, DiagramError> {
        let components = self.components.iter().zip(&other.components).map(|(f, g)| self.field.mul(g, f)).collect::<Result<_, _>>()?;
        Ok(DiagramMorphism { field: self.field, real_len: self.real_len, components })
    }

    fn check(&self, source: &MatrixDiagram, target: &MatrixDiagram) -> Result<(), DiagramError> {
        same_shape(source, target)?;
        for (i, m) in self.components.iter().enumerate() {
            if m.shape() != (target.dims[i], source.dims[i]) || self.real_len != source.real_len {
                return Err(DiagramError::Shape(vec![format!("component {i} does not match the diagrams")]));
            }
        }
        Ok(())
    }

    /// Cover maps with which the morphism does not commute.
    pub fn failures(&self, strata: &Strata, source: &MatrixDiagram, target: &MatrixDiagram) -> Result<Vec<MorphismFailure>, DiagramError> {
        self.check(source, target)?;
        let (imag, real) = (strata.imag(), strata.real());
        let f = self.field;
        let mut out = Vec::new();
        for (&(a, b1, b2), m) in &source.dprime {
            let left = f.mul(target.dprime(a, b1, b2), self.component(a, b1))?;
            let right = f.mul(self.component(a, b2), m)?;
            if left != right {
                out.push(MorphismFailure { map: format!("dprime {}|{}->{}", imag.label(a), real.label(b1), real.label(b2)) });
            }
        }
        for (&(a2, a1, b), m) in &source.dsecond {
            let left = f.mul(target.dsecond(a2, a1, b), self.component(a2, b))?;
            let right = f.mul(self.component(a1, b), m)?;
            if left != right {
                out.push(MorphismFailure { map: format!("dsecond {}->{}|{}", imag.label(a2), imag.label(a1), real.label(b)) });
            }
        }
        out.sort();
        Ok(out)
    }

    /// `rank f_{A,B}`, the dimension of the pointwise image.
    pub fn rank(&self, a: FaceId, b: FaceId) -> usize {
        self.field.rank(self.component(a, b))
    }

    /// Pointwise kernel with the induced maps, and its inclusion into the source.
    pub fn kernel(&self, source: &MatrixDiagram, target: &MatrixDiagram) -> Result<(MatrixDiagram, DiagramMorphism), DiagramError> {
        self.check(source, target)?;
        let f = self.field;
        let bases: Vec<Matrix> = self.components.iter().map(|m| f.kernel_basis(m)).collect();
        let n = self.real_len;
        let idx = |a: FaceId, b: FaceId| a.0 * n + b.0;
        // the induced map X satisfies K_target · X = map · K_source
        let induced = |m: &Matrix, from: usize, to: usize, what: &str| -> Result<Matrix, DiagramError> {
            let image = f.mul(m, &bases[from])?;
            f.solve(&bases[to], &image).ok_or_else(|| DiagramError::Internal(format!("{what} does not preserve the kernel")))
        };
        let mut dprime = BTreeMap::new();
        for (&(a, b1, b2), m) in &source.dprime {
            dprime.insert((a, b1, b2), induced(m, idx(a, b1), idx(a, b2), "dprime")?);
        }
        let mut dsecond = BTreeMap::new();
        for (&(a2, a1, b), m) in &source.dsecond {
            dsecond.insert((a2, a1, b), induced(m, idx(a2, b), idx(a1, b), "dsecond")?);
        }
        let kernel = MatrixDiagram {
            field: f,
            imag_len: source.imag_len,
            real_len: n,
            dims: bases.iter().map(Matrix::cols).collect(),
            dprime,
            dsecond,
        };
        let inclusion = DiagramMorphism { field: f, real_len: n, components: bases };
        Ok((kernel, inclusion))
    }

    /// Pointwise cokernel with the induced maps, and the projection from the target.
    pub fn cokernel(&self, source: &MatrixDiagram, target: &MatrixDiagram) -> Result<(MatrixDiagram, DiagramMorphism), DiagramError> {
        self.check(source, target)?;
        let f = self.field;
        let projections: Vec<Matrix> = self.components.iter().map(|m| f.cokernel_projection(m)).collect();
        let n = self.real_len;
        let idx = |a: FaceId, b: FaceId| a.0 * n + b.0;
        // the induced map X satisfies X · P_from = P_to · map
        let induced = |m: &Matrix, from: usize, to: usize, what: &str| -> Result<Matrix, DiagramError> {
            let image = f.mul(&projections[to], m)?;
            f.solve(&projections[from].transpose(), &image.transpose())
                .map(|x| x.transpose())
                .ok_or_else(|| DiagramError::Internal(format!("{what} does not preserve the image")))
        };
        let mut dprime = BTreeMap::new();
        for (&(a, b1, b2), m) in &target.dprime {
            dprime.insert((a, b1, b2), induced(m, idx(a, b1), idx(a, b2), "dprime")?);
        }
        let mut dsecond = BTreeMap::new();
        for (&(a2, a1, b), m) in &target.dsecond {
            dsecond.insert((a2, a1, b), induced(m, idx(a2, b), idx(a1, b), "dsecond")?);
        }
        let coker = MatrixDiagram {
            field: f,
            imag_len: target.imag_len,
            real_len: n,
            dims: projections.iter().map(Matrix::rows).collect(),
            dprime,
            dsecond,
        };
        let projection = DiagramMorphism { field: f, real_len: n, components: projections };
        Ok((coker, projection))
    }

    /// The transposed morphism `F* -> E*` between dual diagrams.
    pub fn dualize(&self, strata: &Strata) -> Result<DiagramMorphism, DiagramError> {
        if !strata.is_central() {
            return Err(DiagramError::NotCentral);
        }
        let n = self.real_len;
        let mut components = vec![Matrix::zeros(0, 0); self.components.len()];
        for a in 0..n {
            for b in 0..n {
                components[a * n + b] = self.components[b * n + a].transpose();
            }
        }
        Ok(DiagramMorphism { field: self.field, real_len: n, components })
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }
}
