//! JSON form of a diagram:
//!
//! ```json
//! {"field": "Q",
//!  "dims": {"0|0": 1},
//!  "dprime": {"A|B1->B2": [["1"]]},
//!  "dsecond": {"A2->A1|B": [["1"]]}}
//! ```
//!
//! Faces are sign strings; `dims` keys put the imaginary face first. Omitted spaces are zero
//! and omitted maps are zero matrices. Matrices are arrays of rows of rational strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DiagramError, MatrixDiagram, PrimeKey, SecondKey};
use crate::arrangement::{Coefficient, FaceId, FacePoset};
use crate::linalg::{format_rational, parse_rational, FieldSpec, Matrix};
use crate::strata::Strata;

pub type MatrixFile = Vec<Vec<Coefficient>>;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub dprime: BTreeMap<String, MatrixFile>,
    #[serde(default)]
    pub dsecond: BTreeMap<String, MatrixFile>,
}

/// How to read a diagram file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Overrides the field named in the file.
    pub field: Option<FieldSpec>,
    /// `dsecond` keys are written `"A1->A2|B"` (smaller face first). The matrix is still the
    /// map `E_{A2,B} -> E_{A1,B}`.
    pub dsecond_covariant: bool,
}

fn parse_matrix(m: &MatrixFile, expected_cols: usize) -> Result<Matrix, DiagramError> {
    let cols = m.first().map_or(expected_cols, Vec::len);
    let rows = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    Coefficient::Int(v) => Ok(crate::arrangement::int(*v)),
                    Coefficient::Text(s) => parse_rational(s).map_err(|e| DiagramError::Parse(e.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows, cols).map_err(|e| DiagramError::Parse(e.to_string()))
}

fn format_matrix(m: &Matrix) -> MatrixFile {
    m.row_vecs().iter().map(|r| r.iter().map(|x| Coefficient::Text(format_rational(x))).collect()).collect()
}

struct KeyParser<'a> {
    imag: &'a FacePoset,
    real: &'a FacePoset,
    unknown: Vec<String>,
}

impl KeyParser<'_> {
    fn face(&mut self, poset_is_imag: bool, label: &str, key: &str) -> Option<FaceId> {
        let poset = if poset_is_imag { self.imag } else { self.real };
        match poset.parse(label.trim()) {
            Ok(f) => Some(f),
            Err(_) => {
                self.unknown.push(format!("{key:?} (face {:?})", label.trim()));
                None
            }
        }
    }
}

fn split2<'a>(s: &'a str, sep: &str, key: &str) -> Result<(&'a str, &'a str), DiagramError> {
    let mut it = s.splitn(2, sep);
    match (it.next(), it.next()) {
        (Some(x), Some(y)) if !y.contains(sep) => Ok((x, y)),
        _ => Err(DiagramError::Parse(format!("malformed key {key:?}"))),
    }
}

impl DiagramFile {
    pub fn build(&self, strata: &Strata, opts: LoadOptions) -> Result<MatrixDiagram, DiagramError> {
        let field = opts.field.unwrap_or(self.field);
        let mut p = KeyParser { imag: strata.imag(), real: strata.real(), unknown: Vec::new() };
        let mut dims = BTreeMap::new();
        for (key, &d) in &self.dims {
            let (a, b) = split2(key, "|", key)?;
            if let (Some(a), Some(b)) = (p.face(true, a, key), p.face(false, b, key)) {
                dims.insert((a, b), d);
            }
        }
        let mut prime_raw: Vec<(PrimeKey, &MatrixFile)> = Vec::new();
        for (key, m) in &self.dprime {
            let (a, bs) = split2(key, "|", key)?;
            let (b1, b2) = split2(bs, "->", key)?;
            if let (Some(a), Some(b1), Some(b2)) = (p.face(true, a, key), p.face(false, b1, key), p.face(false, b2, key)) {
                prime_raw.push(((a, b1, b2), m));
            }
        }
        let mut second_raw: Vec<(SecondKey, &MatrixFile)> = Vec::new();
        for (key, m) in &self.dsecond {
            let (aa, b) = split2(key, "|", key)?;
            let (x, y) = split2(aa, "->", key)?;
            let (a2, a1) = if opts.dsecond_covariant { (y, x) } else { (x, y) };
            if let (Some(a2), Some(a1), Some(b)) = (p.face(true, a2, key), p.face(true, a1, key), p.face(false, b, key)) {
                second_raw.push(((a2, a1, b), m));
            }
        }
        if !p.unknown.is_empty() {
            return Err(DiagramError::UnknownKeys(p.unknown));
        }
        let dim = |a: FaceId, b: FaceId| dims.get(&(a, b)).copied().unwrap_or(0);
        let dprime = prime_raw
            .into_iter()
            .map(|((a, b1, b2), m)| Ok(((a, b1, b2), parse_matrix(m, dim(a, b1))?)))
            .collect::<Result<BTreeMap<_, _>, DiagramError>>()?;
        let dsecond = second_raw
            .into_iter()
            .map(|((a2, a1, b), m)| Ok(((a2, a1, b), parse_matrix(m, dim(a2, b))?)))
            .collect::<Result<BTreeMap<_, _>, DiagramError>>()?;
        MatrixDiagram::from_parts(strata, field, dims, dprime, dsecond)
    }
}

impl MatrixDiagram {
    pub fn from_json(strata: &Strata, text: &str, opts: LoadOptions) -> Result<MatrixDiagram, DiagramError> {
        let file: DiagramFile = serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
        file.build(strata, opts)
    }

    /// Nonzero spaces and every map between nonzero spaces.
    pub fn to_file(&self, strata: &Strata) -> DiagramFile {
        let (imag, real) = (strata.imag(), strata.real());
        let mut file = DiagramFile { field: self.field, ..Default::default() };
        for a in imag.ids() {
            for b in real.ids() {
                if self.dim(a, b) > 0 {
                    file.dims.insert(format!("{}|{}", imag.label(a), real.label(b)), self.dim(a, b));
                }
            }
        }
        for (&(a, b1, b2), m) in &self.dprime {
            if m.rows() > 0 && m.cols() > 0 {
                file.dprime.insert(format!("{}|{}->{}", imag.label(a), real.label(b1), real.label(b2)), format_matrix(m));
            }
        }
        for (&(a2, a1, b), m) in &self.dsecond {
            if m.rows() > 0 && m.cols() > 0 {
                file.dsecond.insert(format!("{}->{}|{}", imag.label(a2), imag.label(a1), real.label(b)), format_matrix(m));
            }
        }
        file
    }

    pub fn to_json(&self, strata: &Strata) -> String {
        serde_json::to_string_pretty(&self.to_file(strata)).expect("serializable")
    }
}
