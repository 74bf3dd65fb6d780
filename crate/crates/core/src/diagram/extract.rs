use std::collections::BTreeMap;

use serde::Serialize;

use super::{DiagramError, MatrixDiagram};
use crate::arrangement::tits_product;
use crate::linalg::Matrix;
use crate::strata::Strata;

/// The column `B ↦ E_{0,B}` with its `∂′` maps and the row `A ↦ E_{A,0}` with its `∂″` maps,
/// keyed by sign strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleIndexed {
    pub column_dims: BTreeMap<String, usize>,
    #[serde(skip)]
    pub column_maps: BTreeMap<(String, String), Matrix>,
    pub row_dims: BTreeMap<String, usize>,
    #[serde(skip)]
    pub row_maps: BTreeMap<(String, String), Matrix>,
    /// Pairs `"A|B"` with `dim E_{A,B} != dim E_{0, B∘A}`.
    pub dimension_law_failures: Vec<String>,
}

/// Restricts a central diagram to the zero column and zero row and checks the dimension
/// law `dim E_{A,B} = dim E_{0, B∘A}`.
pub fn extract_single_indexed(strata: &Strata, d: &MatrixDiagram) -> Result<SingleIndexed, DiagramError> {
    if !strata.is_central() {
        return Err(DiagramError::NotCentral);
    }
    let faces = strata.real();
    // the minimal face must be the origin itself
    let zero = faces.zero_face().filter(|&z| faces.dim(z) == 0).ok_or(DiagramError::MissingZeroFace)?;
    let column_dims = faces.ids().map(|b| (faces.label(b), d.dim(zero, b))).collect();
    let row_dims = faces.ids().map(|a| (faces.label(a), d.dim(a, zero))).collect();
    let column_maps = faces
        .covers()
        .into_iter()
        .map(|(b1, b2)| ((faces.label(b1), faces.label(b2)), d.dprime(zero, b1, b2).clone()))
        .collect();
    let row_maps = faces
        .covers()
        .into_iter()
        .map(|(a1, a2)| ((faces.label(a2), faces.label(a1)), d.dsecond(a2, a1, zero).clone()))
        .collect();
    let mut dimension_law_failures = Vec::new();
    for a in faces.ids() {
        for b in faces.ids() {
            let ba = tits_product(faces, b, a)?;
            if d.dim(a, b) != d.dim(zero, ba) {
                dimension_law_failures.push(format!("{}|{}", faces.label(a), faces.label(b)));
            }
        }
    }
    Ok(SingleIndexed { column_dims, column_maps, row_dims, row_maps, dimension_law_failures })
}
