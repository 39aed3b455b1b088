//! JSON matrix exchange format.
//!
//! ```json
//! {"n": 2, "kind": "psd", "entries": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]]}
//! ```
//!
//! `entries` is an `n x n` row-major array of `[re, im]` pairs. `kind` is
//! `"psd"` or `"hermitian"` and selects which constructor validates the matrix.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linalg::{DenseMatrix, HermitianMatrix, PsdMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Psd,
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub kind: MatrixKind,
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedMatrix {
    Psd(PsdMatrix),
    Hermitian(HermitianMatrix),
}

impl ParsedMatrix {
    pub fn as_hermitian(&self) -> &HermitianMatrix {
        match self {
            Self::Psd(p) => p.as_hermitian(),
            Self::Hermitian(h) => h,
        }
    }

    /// The PSD matrix, or a PSD validation of a Hermitian one.
    pub fn into_psd(self) -> Result<PsdMatrix, MatrixFileError> {
        match self {
            Self::Psd(p) => Ok(p),
            Self::Hermitian(h) => Ok(PsdMatrix::new(h)?),
        }
    }
}

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("cannot read or write matrix file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed matrix file: {0}")]
    Parse(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl MatrixFile {
    pub fn from_dense(a: &DenseMatrix, kind: MatrixKind) -> Self {
        Self {
            n: a.n(),
            kind,
            entries: a
                .rows()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix, MatrixFileError> {
        if self.entries.len() != self.n {
            return Err(MatrixFileError::Parse(format!(
                "\"n\" is {} but \"entries\" has {} rows",
                self.n,
                self.entries.len()
            )));
        }
        let rows: Vec<Vec<Complex64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        DenseMatrix::from_rows(&rows).map_err(|e| match e {
            Error::RaggedRows { row, len, expected } => {
                MatrixFileError::Parse(format!("row {row} has {len} entries, expected {expected}"))
            }
            other => MatrixFileError::Invalid(other),
        })
    }

    pub fn validate(&self) -> Result<ParsedMatrix, MatrixFileError> {
        let dense = self.to_dense()?;
        let h = HermitianMatrix::new(dense)?;
        Ok(match self.kind {
            MatrixKind::Hermitian => ParsedMatrix::Hermitian(h),
            MatrixKind::Psd => ParsedMatrix::Psd(PsdMatrix::new(h)?),
        })
    }
}

pub fn parse_matrix_str(text: &str) -> Result<ParsedMatrix, MatrixFileError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| MatrixFileError::Parse(e.to_string()))?;
    file.validate()
}

/// Reads and validates a matrix file.
pub fn parse_matrix_file(path: impl AsRef<Path>) -> Result<ParsedMatrix, MatrixFileError> {
    parse_matrix_str(&fs::read_to_string(path)?)
}

pub fn to_json(a: &DenseMatrix, kind: MatrixKind) -> String {
    serde_json::to_string(&MatrixFile::from_dense(a, kind)).expect("matrix file serializes")
}

pub fn write_matrix_file(
    path: impl AsRef<Path>,
    a: &DenseMatrix,
    kind: MatrixKind,
) -> Result<(), MatrixFileError> {
    let mut text = to_json(a, kind);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
