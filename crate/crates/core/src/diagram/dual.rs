use super::{DiagramError, MatrixDiagram};
use crate::strata::Strata;

impl MatrixDiagram {
    /// `(E*)_{A,B} = (E_{B,A})*`, with `∂′` and `∂″` exchanged and transposed.
    pub fn dualize(&self, strata: &Strata) -> Result<MatrixDiagram, DiagramError> {
        if !strata.is_central() {
            return Err(DiagramError::NotCentral);
        }
        if !self.fits(strata) {
            return Err(DiagramError::WrongSize("diagram does not match the arrangement".into()));
        }
        let n = self.real_len;
        let mut dims = vec![0; self.dims.len()];
        for a in 0..n {
            for b in 0..n {
                dims[a * n + b] = self.dims[b * n + a];
            }
        }
        // ∂′*_{A|B1,B2} = (∂″_{B2,B1|A})^T and ∂″*_{A2,A1|B} = (∂′_{B|A1,A2})^T
        let dprime = self.dsecond.iter().map(|(&(b2, b1, a), m)| ((a, b1, b2), m.transpose())).collect();
        let dsecond = self.dprime.iter().map(|(&(b, a1, a2), m)| ((a2, a1, b), m.transpose())).collect();
        Ok(MatrixDiagram { field: self.field, imag_len: n, real_len: n, dims, dprime, dsecond })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{Arrangement, DEFAULT_FACE_BUDGET};
    use crate::diagram::validate;
    use crate::linalg::{FieldSpec, Matrix};

    #[test]
    fn involution_and_swapped_failures() {
        let s = Strata::new(Arrangement::boolean(1), DEFAULT_FACE_BUDGET).unwrap();
        let f = |l: &str| s.real().parse(l).unwrap();
        let mut d = MatrixDiagram::constant(&s, FieldSpec::Rationals);
        assert_eq!(d.dualize(&s).unwrap(), d);
        d.set_dprime((f("+"), f("0"), f("-")), Matrix::scalar(0)).unwrap();
        let dual = d.dualize(&s).unwrap();
        assert_eq!(dual.dualize(&s).unwrap(), d);
        let (r, rd) = (validate(&s, &d).unwrap(), validate(&s, &dual).unwrap());
        assert_eq!(r.m3_prime.len(), 1);
        assert!(r.m3_second.is_empty());
        assert_eq!(rd.m3_second.len(), 1);
        assert!(rd.m3_prime.is_empty());
        let affine = Strata::new(Arrangement::points_on_line(&[0]), DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(MatrixDiagram::constant(&affine, FieldSpec::Rationals).dualize(&affine), Err(DiagramError::NotCentral));
    }
}
