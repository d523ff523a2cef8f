//! JSON documents describing a state.
//!
//! ```json
//! {"kind": "werner", "dims": [2, 2], "payload": {"eps": -1.0}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Doubles are written in shortest round-trip form, so parsing a
//! serialized document reproduces every value bit for bit.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{PptError, Result};
use crate::family::{assemble, assemble_qubit_qudit, FamilyParams, QubitQuditParams};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::named::{isotropic, werner, IsotropicSpec, WernerSpec};

type Rows = Vec<Vec<C64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Dense,
    Family,
    QubitQudit,
    Werner,
    Isotropic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensePayload {
    pub matrix: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyPayload {
    pub x: Rows,
    pub m: Vec<Rows>,
    pub n: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitQuditPayload {
    pub x00: f64,
    pub x11: f64,
    pub x01: C64,
    pub a: Rows,
    pub b: Rows,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsPayload {
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Dense(DensePayload),
    Family(FamilyPayload),
    QubitQudit(QubitQuditPayload),
    Werner(EpsPayload),
    Isotropic(EpsPayload),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub dims: [usize; 2],
    pub payload: Payload,
}

/// A document resolved into domain types.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Dense { rho: ComplexMatrix, d_a: usize, d_b: usize },
    Family(FamilyParams),
    QubitQudit(QubitQuditParams),
    Werner(WernerSpec),
    Isotropic(IsotropicSpec),
}

impl State {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            State::Dense { d_a, d_b, .. } => (*d_a, *d_b),
            State::Family(p) => (p.d_a(), p.d_b()),
            State::QubitQudit(q) => (2, q.d_b()),
            State::Werner(s) => (s.d, s.d),
            State::Isotropic(s) => (s.d, s.d),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        match self {
            State::Dense { rho, .. } => rho.clone(),
            State::Family(p) => assemble(p),
            State::QubitQudit(q) => assemble_qubit_qudit(q),
            State::Werner(s) => werner(*s),
            State::Isotropic(s) => isotropic(*s),
        }
    }

    pub fn to_document(&self) -> MatrixDocument {
        let (d_a, d_b) = self.dims();
        let payload = match self {
            State::Dense { rho, .. } => Payload::Dense(DensePayload { matrix: rho.rows() }),
            State::Family(p) => Payload::Family(FamilyPayload {
                x: p.x().rows(),
                m: p.m().iter().map(|b| b.rows()).collect(),
                n: p.n().iter().map(|b| b.rows()).collect(),
            }),
            State::QubitQudit(q) => Payload::QubitQudit(QubitQuditPayload {
                x00: q.x00,
                x11: q.x11,
                x01: q.x01,
                a: q.a().rows(),
                b: q.b().rows(),
            }),
            State::Werner(s) => Payload::Werner(EpsPayload { eps: s.eps }),
            State::Isotropic(s) => Payload::Isotropic(EpsPayload { eps: s.eps }),
        };
        MatrixDocument {
            dims: [d_a, d_b],
            payload,
        }
    }
}

fn matrix(rows: &Rows, what: &str) -> Result<ComplexMatrix> {
    if rows.is_empty() {
        return Ok(ComplexMatrix::zeros(0));
    }
    ComplexMatrix::from_rows(rows.clone()).map_err(|e| PptError::Document(format!("{what}: {e}")))
}

fn hermitian(rows: &Rows, what: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::new(matrix(rows, what)?).map_err(|e| PptError::Document(format!("{what}: {e}")))
}

fn square_dims(dims: [usize; 2], kind: &str) -> Result<usize> {
    if dims[0] != dims[1] {
        return Err(PptError::Document(format!(
            "{kind} documents need dA = dB, got {dims:?}"
        )));
    }
    Ok(dims[0])
}

impl MatrixDocument {
    pub fn kind(&self) -> DocumentKind {
        match self.payload {
            Payload::Dense(_) => DocumentKind::Dense,
            Payload::Family(_) => DocumentKind::Family,
            Payload::QubitQudit(_) => DocumentKind::QubitQudit,
            Payload::Werner(_) => DocumentKind::Werner,
            Payload::Isotropic(_) => DocumentKind::Isotropic,
        }
    }

    pub fn dense(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Self {
        Self {
            dims: [d_a, d_b],
            payload: Payload::Dense(DensePayload { matrix: rho.rows() }),
        }
    }

    /// Converts to domain types, checking shapes and parameter ranges.
    pub fn to_state(&self) -> Result<State> {
        let [d_a, d_b] = self.dims;
        match &self.payload {
            Payload::Dense(p) => {
                let rho = matrix(&p.matrix, "matrix")?;
                if rho.dim() != d_a * d_b || d_a == 0 || d_b == 0 {
                    return Err(PptError::DimensionMismatch(format!(
                        "matrix is {0}x{0}, dims {d_a}x{d_b} need {1}",
                        rho.dim(),
                        d_a * d_b
                    )));
                }
                Ok(State::Dense { rho, d_a, d_b })
            }
            Payload::Family(p) => {
                let x = hermitian(&p.x, "x")?;
                let m = p.m.iter().map(|b| hermitian(b, "m")).collect::<Result<_>>()?;
                let n = p.n.iter().map(|b| hermitian(b, "n")).collect::<Result<_>>()?;
                Ok(State::Family(FamilyParams::new(d_a, d_b, x, m, n)?))
            }
            Payload::QubitQudit(p) => {
                if d_a != 2 {
                    return Err(PptError::Document(format!(
                        "qubit_qudit documents need dA = 2, got {d_a}"
                    )));
                }
                let a = hermitian(&p.a, "a")?;
                let b = hermitian(&p.b, "b")?;
                Ok(State::QubitQudit(QubitQuditParams::new(
                    d_b, p.x00, p.x11, p.x01, a, b,
                )?))
            }
            Payload::Werner(p) => {
                let spec = WernerSpec {
                    d: square_dims(self.dims, "werner")?,
                    eps: p.eps,
                };
                spec.check()?;
                Ok(State::Werner(spec))
            }
            Payload::Isotropic(p) => {
                let spec = IsotropicSpec {
                    d: square_dims(self.dims, "isotropic")?,
                    eps: p.eps,
                };
                spec.check()?;
                Ok(State::Isotropic(spec))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents contain only finite numbers")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| PptError::Document(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: DocumentKind,
    dims: [usize; 2],
    payload: Value,
}

impl Serialize for MatrixDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let payload = match &self.payload {
            Payload::Dense(p) => serde_json::to_value(p),
            Payload::Family(p) => serde_json::to_value(p),
            Payload::QubitQudit(p) => serde_json::to_value(p),
            Payload::Werner(p) | Payload::Isotropic(p) => serde_json::to_value(p),
        }
        .map_err(S::Error::custom)?;
        RawDocument {
            kind: self.kind(),
            dims: self.dims,
            payload,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawDocument::deserialize(d)?;
        let v = raw.payload;
        let payload = match raw.kind {
            DocumentKind::Dense => serde_json::from_value(v).map(Payload::Dense),
            DocumentKind::Family => serde_json::from_value(v).map(Payload::Family),
            DocumentKind::QubitQudit => serde_json::from_value(v).map(Payload::QubitQudit),
            DocumentKind::Werner => serde_json::from_value(v).map(Payload::Werner),
            DocumentKind::Isotropic => serde_json::from_value(v).map(Payload::Isotropic),
        }
        .map_err(|e| D::Error::custom(format!("payload: {e}")))?;
        Ok(MatrixDocument {
            dims: raw.dims,
            payload,
        })
    }
}
