//! Sparse-triplet matrix dumps that reload bit-exactly.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Complex64};

/// `(row, col, re, im)` for every entry that is not `+0.0 + 0.0i`.
pub type Triplet = (usize, usize, f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpMeta {
    /// Name of the generating operation.
    pub op: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub meta: DumpMeta,
    /// Sorted row-major.
    pub entries: Vec<Triplet>,
}

impl MatrixDump {
    pub fn from_matrix(m: &CMatrix, meta: DumpMeta) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                // keeps −0.0 so the reload is bit-exact
                if z.re.to_bits() != 0 || z.im.to_bits() != 0 {
                    entries.push((r, c, z.re, z.im));
                }
            }
        }
        MatrixDump {
            rows: m.nrows(),
            cols: m.ncols(),
            meta,
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        let mut last: Option<(usize, usize)> = None;
        for &(r, c, re, im) in &self.entries {
            if r >= self.rows || c >= self.cols {
                return Err(Error::InvalidDimension(format!("entry ({r}, {c}) outside {}×{}", self.rows, self.cols)));
            }
            if last.is_some_and(|l| l >= (r, c)) {
                return Err(Error::InvalidSpec("dump entries are not sorted row-major".into()));
            }
            last = Some((r, c));
            m[(r, c)] = Complex64::new(re, im);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dump serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("bad matrix dump: {e}")))
    }
}
