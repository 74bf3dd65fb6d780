use super::{DiagramError, DiagramMorphism, MatrixDiagram};
use crate::arrangement::{FaceId, FacePoset};
use crate::strata::Strata;

/// Splits each face of the product poset into its two factors by cutting the sign vector.
fn factor_map(product: &FacePoset, left: &FacePoset, right: &FacePoset, split: usize) -> Result<Vec<(FaceId, FaceId)>, DiagramError> {
    product
        .ids()
        .map(|f| {
            let (s1, s2) = product.signs(f).split_at(split);
            match (left.find(s1), right.find(s2)) {
                (Some(x), Some(y)) => Ok((x, y)),
                _ => Err(DiagramError::Internal(format!("product face {} has no factors", product.label(f)))),
            }
        })
        .collect()
}

struct Factors {
    imag: Vec<(FaceId, FaceId)>,
    real: Vec<(FaceId, FaceId)>,
}

fn factors(s1: &Strata, s2: &Strata, product: &Strata) -> Result<Factors, DiagramError> {
    if product.arrangement().len() != s1.arrangement().len() + s2.arrangement().len() {
        return Err(DiagramError::WrongSize("product arrangement does not match its factors".into()));
    }
    let real = factor_map(product.real(), s1.real(), s2.real(), s1.arrangement().len())?;
    let imag = factor_map(product.imag(), s1.imag(), s2.imag(), s1.linear().len())?;
    Ok(Factors { imag, real })
}

/// `(E ⊠ F)_{(A1,A2),(B1,B2)} = E_{A1,B1} ⊗ F_{A2,B2}` over the product arrangement, as built
/// by [`crate::arrangement::Arrangement::product`].
pub fn external_product(s1: &Strata, d1: &MatrixDiagram, s2: &Strata, d2: &MatrixDiagram, product: &Strata) -> Result<MatrixDiagram, DiagramError> {
    if d1.field() != d2.field() {
        return Err(DiagramError::FieldMismatch);
    }
    let field = d1.field();
    let fx = factors(s1, s2, product)?;
    let ident = |k| crate::linalg::Matrix::identity(k);
    MatrixDiagram::from_fn(
        product,
        field,
        |a, b| {
            let ((a1, a2), (b1, b2)) = (fx.imag[a.0], fx.real[b.0]);
            d1.dim(a1, b1) * d2.dim(a2, b2)
        },
        |a, b, c| {
            let ((a1, a2), (b1, b2), (c1, c2)) = (fx.imag[a.0], fx.real[b.0], fx.real[c.0]);
            if b1 == c1 {
                field.kron(&ident(d1.dim(a1, b1)), d2.dprime(a2, b2, c2))
            } else {
                field.kron(d1.dprime(a1, b1, c1), &ident(d2.dim(a2, b2)))
            }
        },
        |a2, a1, b| {
            let ((x2, y2), (x1, y1), (b1, b2)) = (fx.imag[a2.0], fx.imag[a1.0], fx.real[b.0]);
            if x2 == x1 {
                field.kron(&ident(d1.dim(x1, b1)), d2.dsecond(y2, y1, b2))
            } else {
                field.kron(d1.dsecond(x2, x1, b1), &ident(d2.dim(y2, b2)))
            }
        },
    )
}

/// `f ⊠ g` between external products.
pub fn external_product_morphism(
    s1: &Strata,
    (f, src1, tgt1): (&DiagramMorphism, &MatrixDiagram, &MatrixDiagram),
    s2: &Strata,
    (g, src2, tgt2): (&DiagramMorphism, &MatrixDiagram, &MatrixDiagram),
    product: &Strata,
) -> Result<(MatrixDiagram, MatrixDiagram, DiagramMorphism), DiagramError> {
    let source = external_product(s1, src1, s2, src2, product)?;
    let target = external_product(s1, tgt1, s2, tgt2, product)?;
    let fx = factors(s1, s2, product)?;
    let field = source.field();
    let m = DiagramMorphism::from_fn(&source, &target, |a, b| {
        let ((a1, a2), (b1, b2)) = (fx.imag[a.0], fx.real[b.0]);
        field.kron(f.component(a1, b1), g.component(a2, b2))
    })?;
    Ok((source, target, m))
}
