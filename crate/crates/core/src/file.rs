//! JSON file format for a multi-matrix algebra with a comultiplication.
//!
//! ```json
//! {
//!   "version": "dqg-1",
//!   "block_dims": [1, 1],
//!   "delta": [[1.0, 0.0], ...],
//!   "expected": { "h": [...], "counit": [...], "antipode": [...], "haar": [...] },
//!   "note": "..."
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `delta` and `antipode` are dense and
//! column-major over the canonical bases; `delta` has `dim(A)^2` rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::MultiMatrixAlgebra;
use crate::axioms::Comultiplication;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector, C64};

pub const FORMAT_VERSION: &str = "dqg-1";

type Pair = [f64; 2];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    h: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    counit: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    antipode: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    haar: Option<Vec<Pair>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: String,
    block_dims: Vec<usize>,
    delta: Vec<Pair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    expected: Option<RawExpected>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    note: Option<String>,
}

/// Reference values a verification run is compared against.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    pub h: Option<CVector>,
    pub counit: Option<CVector>,
    pub antipode: Option<CMatrix>,
    pub haar: Option<CVector>,
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        self.h.is_none() && self.counit.is_none() && self.antipode.is_none() && self.haar.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGroupFile {
    pub block_dims: Vec<usize>,
    pub delta: CMatrix,
    pub expected: Expected,
    pub note: Option<String>,
}

fn to_pairs(values: &[C64]) -> Vec<Pair> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(values: &[Pair]) -> Vec<C64> {
    values.iter().map(|p| c(p[0], p[1])).collect()
}

fn vector_field(name: &str, values: Option<Vec<Pair>>, n: usize) -> Result<Option<CVector>> {
    values
        .map(|v| {
            if v.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "expected.{name} has {} entries, expected {n}",
                    v.len()
                )));
            }
            Ok(CVector::from_vec(from_pairs(&v)))
        })
        .transpose()
}

impl QuantumGroupFile {
    pub fn from_comultiplication(delta: &Comultiplication, expected: Expected, note: Option<String>) -> Self {
        QuantumGroupFile {
            block_dims: delta.algebra().block_dims().to_vec(),
            delta: delta.matrix().clone(),
            expected,
            note,
        }
    }

    pub fn algebra(&self) -> Result<MultiMatrixAlgebra> {
        MultiMatrixAlgebra::new(&self.block_dims)
    }

    pub fn comultiplication(&self) -> Result<Comultiplication> {
        Comultiplication::new(&self.algebra()?, self.delta.clone())
    }

    pub fn to_json(&self) -> String {
        let e = &self.expected;
        let raw = RawFile {
            version: FORMAT_VERSION.to_string(),
            block_dims: self.block_dims.clone(),
            delta: to_pairs(self.delta.as_slice()),
            expected: (!e.is_empty()).then(|| RawExpected {
                h: e.h.as_ref().map(|v| to_pairs(v.as_slice())),
                counit: e.counit.as_ref().map(|v| to_pairs(v.as_slice())),
                antipode: e.antipode.as_ref().map(|m| to_pairs(m.as_slice())),
                haar: e.haar.as_ref().map(|v| to_pairs(v.as_slice())),
            }),
            note: self.note.clone(),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::ParseError {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        if raw.version != FORMAT_VERSION {
            return Err(Error::ParseError {
                location: "field version".into(),
                message: format!("unsupported version {:?}", raw.version),
            });
        }
        let algebra = MultiMatrixAlgebra::new(&raw.block_dims)?;
        let n = algebra.dim();
        if raw.delta.len() != n * n * n {
            return Err(Error::ShapeMismatch(format!(
                "delta has {} entries, expected {} for block_dims {:?}",
                raw.delta.len(),
                n * n * n,
                raw.block_dims
            )));
        }
        let delta = CMatrix::from_column_slice(n * n, n, &from_pairs(&raw.delta));
        let expected = match raw.expected {
            None => Expected::default(),
            Some(e) => Expected {
                h: vector_field("h", e.h, n)?,
                counit: vector_field("counit", e.counit, n)?,
                antipode: vector_field("antipode", e.antipode, n * n)?.map(|v| CMatrix::from_column_slice(n, n, v.as_slice())),
                haar: vector_field("haar", e.haar, n)?,
            },
        };
        Ok(QuantumGroupFile {
            block_dims: raw.block_dims,
            delta,
            expected,
            note: raw.note,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
