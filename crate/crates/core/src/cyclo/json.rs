//! JSON interchange: `{"rows": r, "cols": c, "entries": [[...], ...]}` where
//! each entry is either `{"a": "p/q", "b": "r/s"}` (exact, `a + bω`) or
//! `[re, im]` (float). State vectors use the same shape with `cols = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CycloNumber, DenseMatrix, Scalar, StateVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Exact(CycloNumber),
    Float([f64; 2]),
}

impl Entry {
    fn to_complex(&self) -> Complex64 {
        match self {
            Entry::Exact(x) => x.embed(),
            Entry::Float([re, im]) => Complex64::new(*re, *im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Entry>>,
}

/// A parsed matrix: exact when every entry is exact, float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(DenseMatrix<CycloNumber>),
    Float(DenseMatrix<Complex64>),
}

impl AnyMatrix {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(text)?;
        Self::from_repr(raw)
    }

    pub fn from_repr(raw: MatrixJson) -> Result<Self> {
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(Error::Parse(format!(
                "entries do not match declared shape {}x{}",
                raw.rows, raw.cols
            )));
        }
        let all_exact = raw.entries.iter().flatten().all(|e| matches!(e, Entry::Exact(_)));
        if all_exact {
            let data = raw
                .entries
                .into_iter()
                .flatten()
                .map(|e| match e {
                    Entry::Exact(x) => x,
                    Entry::Float(_) => unreachable!(),
                })
                .collect();
            Ok(AnyMatrix::Exact(DenseMatrix::new(raw.rows, raw.cols, data)?))
        } else {
            let data = raw.entries.iter().flatten().map(Entry::to_complex).collect();
            Ok(AnyMatrix::Float(DenseMatrix::new(raw.rows, raw.cols, data)?))
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Exact(m) => m.shape(),
            AnyMatrix::Float(m) => m.shape(),
        }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        match self {
            AnyMatrix::Exact(m) => m.to_complex(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }
}

/// Conversion of a scalar to its interchange entry.
pub trait ToEntry {
    fn to_entry(&self) -> Entry;
}

impl ToEntry for CycloNumber {
    fn to_entry(&self) -> Entry {
        Entry::Exact(self.clone())
    }
}

impl ToEntry for Complex64 {
    fn to_entry(&self) -> Entry {
        Entry::Float([self.re, self.im])
    }
}

impl<T: Scalar + ToEntry> DenseMatrix<T> {
    pub fn to_json_repr(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            entries: (0..self.rows())
                .map(|r| self.row(r).iter().map(ToEntry::to_entry).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("serializable")
    }
}

impl<T: Scalar + ToEntry> StateVector<T> {
    pub fn to_json(&self) -> String {
        self.as_column().to_json()
    }
}

impl DenseMatrix<CycloNumber> {
    /// Parses the exact form; float entries are rejected.
    pub fn from_json_exact(text: &str) -> Result<Self> {
        match AnyMatrix::from_json(text)? {
            AnyMatrix::Exact(m) => Ok(m),
            AnyMatrix::Float(_) => Err(Error::Parse("expected exact entries".into())),
        }
    }
}
