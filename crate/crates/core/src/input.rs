//! Matrix input files.
//!
//! ```json
//! {"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": "trivial"}
//! {"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": "principal"}
//! {"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": {"C": [[1, 0], [0, 1]]}}
//! ```
//!
//! `B` is the `n × n` exchange matrix. `coeffs` defaults to `"trivial"`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{CoeffPreset, ExchangeMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(default)]
    pub coeffs: CoeffSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Named(NamedPreset),
    Explicit {
        #[serde(rename = "C")]
        c: Vec<Vec<i64>>,
    },
}

impl Default for CoeffSpec {
    fn default() -> Self {
        CoeffSpec::Named(NamedPreset::Trivial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedPreset {
    Trivial,
    Principal,
}

impl CoeffSpec {
    pub fn preset(&self) -> CoeffPreset {
        match self {
            CoeffSpec::Named(NamedPreset::Trivial) => CoeffPreset::Trivial,
            CoeffSpec::Named(NamedPreset::Principal) => CoeffPreset::Principal,
            CoeffSpec::Explicit { c } => CoeffPreset::Explicit(c.clone()),
        }
    }
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidMatrix(format!("bad matrix JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidMatrix(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validates shapes and builds the extended matrix.
    pub fn to_matrix(&self) -> Result<ExchangeMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidMatrix("n must be at least 1".into()));
        }
        if self.b.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "B has {} rows, expected n = {n}",
                self.b.len()
            )));
        }
        for (i, row) in self.b.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "B row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        if let CoeffSpec::Explicit { c } = &self.coeffs {
            for (i, row) in c.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidMatrix(format!(
                        "C row {} has {} entries, expected {n}",
                        i + 1,
                        row.len()
                    )));
                }
            }
        }
        ExchangeMatrix::with_coefficients(self.b.clone(), &self.coeffs.preset())
    }

    /// Describes an extended matrix; frozen rows are written out explicitly.
    pub fn from_matrix(matrix: &ExchangeMatrix) -> Self {
        let coeffs = if matrix.frozen() == 0 {
            CoeffSpec::Named(NamedPreset::Trivial)
        } else {
            CoeffSpec::Explicit {
                c: matrix.coefficient_rows(),
            }
        };
        Self {
            n: matrix.rank(),
            b: matrix.top_block(),
            coeffs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_presets() {
        let f = MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": "principal"}"#)
            .unwrap();
        let m = f.to_matrix().unwrap();
        assert_eq!(m.frozen(), 2);
        assert_eq!(m.coefficient_rows(), vec![vec![1, 0], vec![0, 1]]);

        let f = MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]]}"#).unwrap();
        assert_eq!(f.to_matrix().unwrap().frozen(), 0);

        let f =
            MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": {"C": [[1, -1]]}}"#)
                .unwrap();
        assert_eq!(f.to_matrix().unwrap().coefficient_rows(), vec![vec![1, -1]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(
            MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": "universal"}"#)
                .is_err()
        );
        assert!(MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]], "extra": 1}"#).is_err());
        let f = MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0, 4]]}"#).unwrap();
        let err = f.to_matrix().unwrap_err().to_string();
        assert!(err.contains("B row 2"), "{err}");
        let f = MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [-1, 0]], "coeffs": {"C": [[1]]}}"#)
            .unwrap();
        let err = f.to_matrix().unwrap_err().to_string();
        assert!(err.contains("C row 1"), "{err}");
        let f = MatrixFile::parse(r#"{"n": 2, "B": [[0, 1], [1, 0]]}"#).unwrap();
        let err = f.to_matrix().unwrap_err().to_string();
        assert!(err.contains("row 1, column 2"), "{err}");
    }

    #[test]
    fn describes_extended_matrix() {
        let m = ExchangeMatrix::with_coefficients(
            vec![vec![0, 1], vec![-1, 0]],
            &CoeffPreset::Principal,
        )
        .unwrap()
        .mutate(0)
        .unwrap();
        let f = MatrixFile::from_matrix(&m);
        assert_eq!(f.to_matrix().unwrap(), m);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"B":[[0,-1],[1,0]],"coeffs":{"C":[[-1,1],[0,1]]}}"#
        );
    }
}
