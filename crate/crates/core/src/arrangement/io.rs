//! JSON form of an arrangement:
//!
//! ```json
//! {"dim": 2, "mode": "central", "hyperplanes": [{"normal": ["1", "0"], "offset": "0"}]}
//! ```
//!
//! Coefficients are rational strings (`"3/4"`) or integers. `mode` defaults to `central` and
//! `offset` to zero.

use serde::{Deserialize, Serialize};

use super::{Arrangement, ArrangementError, Hyperplane, Mode};
use crate::linalg::{format_rational, parse_rational, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn value(&self) -> Result<Scalar, ArrangementError> {
        match self {
            Coefficient::Int(v) => Ok(super::int(*v)),
            Coefficient::Text(s) => parse_rational(s).map_err(|e| ArrangementError::Parse(e.to_string())),
        }
    }
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::Text("0".into())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneFile {
    pub normal: Vec<Coefficient>,
    #[serde(default)]
    pub offset: Coefficient,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub dim: usize,
    #[serde(default = "central")]
    pub mode: Mode,
    pub hyperplanes: Vec<HyperplaneFile>,
}

fn central() -> Mode {
    Mode::Central
}

impl ArrangementFile {
    pub fn build(&self) -> Result<Arrangement, ArrangementError> {
        let hs = self
            .hyperplanes
            .iter()
            .map(|h| {
                let normal = h.normal.iter().map(Coefficient::value).collect::<Result<Vec<_>, _>>()?;
                Ok(Hyperplane::new(normal, h.offset.value()?))
            })
            .collect::<Result<Vec<_>, ArrangementError>>()?;
        Arrangement::new(self.dim, hs, self.mode)
    }

    pub fn from_arrangement(arr: &Arrangement) -> Self {
        ArrangementFile {
            dim: arr.dim(),
            mode: arr.mode(),
            hyperplanes: arr
                .hyperplanes()
                .iter()
                .map(|h| HyperplaneFile {
                    normal: h.normal.iter().map(|x| Coefficient::Text(format_rational(x))).collect(),
                    offset: Coefficient::Text(format_rational(&h.offset)),
                })
                .collect(),
        }
    }
}

impl Arrangement {
    pub fn from_json(text: &str) -> Result<Arrangement, ArrangementError> {
        let file: ArrangementFile = serde_json::from_str(text).map_err(|e| ArrangementError::Parse(e.to_string()))?;
        file.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ArrangementFile::from_arrangement(self)).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let arr = Arrangement::from_json(
            r#"{"dim": 2, "hyperplanes": [{"normal": ["1", "0"]}, {"normal": [1, "-1/2"], "offset": 0}]}"#,
        )
        .unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(Arrangement::from_json(&arr.to_json()).unwrap(), arr);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(Arrangement::from_json("{\"dim\": 1}"), Err(ArrangementError::Parse(_))));
        assert!(matches!(
            Arrangement::from_json(r#"{"dim": 1, "hyperplanes": [{"normal": ["x"]}]}"#),
            Err(ArrangementError::Parse(_))
        ));
        assert_eq!(
            Arrangement::from_json(r#"{"dim": 1, "hyperplanes": [{"normal": ["1"], "offset": "2"}]}"#),
            Err(ArrangementError::NonzeroOffset(0))
        );
    }
}
