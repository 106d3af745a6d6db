//! JSON documents read and written by the CLI and the Python bindings.
//!
//! Every document carries `"schema": 1`. Field elements are integers or
//! coefficient arrays (least significant first); ring and fraction-field
//! elements are integers or expression strings such as `"3*y"` or `"1/(x+1)"`.

use serde::{Deserialize, Serialize};

use crate::curvering::{CurveSpec, FracElem, RingElem, RingMatrix};
use crate::error::{Error, Result};
use crate::finfield::{make_extension, FqElem, FqField};
use crate::forms::{GenusWitness, GramMatrix, SearchBounds, WitnessPair};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn prime_degree() -> usize {
    1
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!("unsupported schema version {v}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u32,
    #[serde(default = "prime_degree")]
    pub k: usize,
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FqField> {
        make_extension(self.p, self.k)
    }

    pub fn from_field(f: &FqField) -> FieldJson {
        FieldJson { p: f.p(), k: f.k() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldElemJson {
    Int(i64),
    Coeffs(Vec<i64>),
}

impl FieldElemJson {
    pub fn to_elem(&self, field: &FqField) -> Result<FqElem> {
        match self {
            FieldElemJson::Int(v) => Ok(field.from_int(*v)),
            FieldElemJson::Coeffs(c) => field.from_coeffs(c),
        }
    }

    pub fn from_elem(e: &FqElem) -> FieldElemJson {
        if e.field().k() == 1 {
            FieldElemJson::Int(e.index() as i64)
        } else {
            FieldElemJson::Coeffs(e.coeffs().into_iter().map(i64::from).collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Polyline,
    Weierstrass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub field: FieldJson,
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<FieldElemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<FieldElemJson>,
}

impl CurveJson {
    pub fn to_curve(&self) -> Result<CurveSpec> {
        check_version(self.schema)?;
        let field = self.field.to_field()?;
        match self.kind {
            CurveKind::Polyline => {
                if self.a.is_some() || self.b.is_some() {
                    return Err(Error::InvalidInput("the line takes no coefficients".into()));
                }
                Ok(CurveSpec::polyline(&field))
            }
            CurveKind::Weierstrass => {
                let (Some(a), Some(b)) = (&self.a, &self.b) else {
                    return Err(Error::InvalidInput("a Weierstrass curve needs both a and b".into()));
                };
                CurveSpec::weierstrass(&a.to_elem(&field)?, &b.to_elem(&field)?)
            }
        }
    }

    pub fn from_curve(c: &CurveSpec) -> CurveJson {
        let (kind, a, b) = match c.coefficients() {
            Some((a, b)) => (
                CurveKind::Weierstrass,
                Some(FieldElemJson::from_elem(a)),
                Some(FieldElemJson::from_elem(b)),
            ),
            None => (CurveKind::Polyline, None, None),
        };
        CurveJson {
            schema: SCHEMA_VERSION,
            field: FieldJson::from_field(c.field()),
            kind,
            a,
            b,
        }
    }
}

/// An element of `O` or of its fraction field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Expr(String),
}

impl EntryJson {
    pub fn to_frac(&self, curve: &CurveSpec) -> Result<FracElem> {
        match self {
            EntryJson::Int(v) => Ok(FracElem::from_ring(curve.from_int(*v))),
            EntryJson::Expr(s) => curve.parse(s),
        }
    }

    pub fn to_ring(&self, curve: &CurveSpec) -> Result<RingElem> {
        let f = self.to_frac(curve)?;
        f.as_ring()
            .cloned()
            .ok_or_else(|| Error::NotIntegral(format!("{f} is not in the coordinate ring")))
    }
}

pub type MatrixJson = Vec<Vec<EntryJson>>;

pub fn matrix_from_json(curve: &CurveSpec, rows: &MatrixJson) -> Result<RingMatrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|e| e.to_frac(curve)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RingMatrix::from_rows(curve, rows)
}

pub fn matrix_to_json(m: &RingMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    pub s: EntryJson,
}

/// Input of `genus-verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub curve: CurveJson,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "G")]
    pub g: MatrixJson,
    pub witnesses: Vec<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

impl WitnessFile {
    pub fn load(&self) -> Result<(GramMatrix, GramMatrix, GenusWitness)> {
        check_version(self.schema)?;
        let curve = self.curve.to_curve()?;
        let f = GramMatrix::new(matrix_from_json(&curve, &self.f)?)?;
        let g = GramMatrix::new(matrix_from_json(&curve, &self.g)?)?;
        let pairs = self
            .witnesses
            .iter()
            .map(|w| {
                Ok(WitnessPair {
                    q: matrix_from_json(&curve, &w.q)?,
                    s: w.s.to_ring(&curve)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((f, g, GenusWitness { pairs }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsJson {
    pub deg_x: usize,
    #[serde(default)]
    pub deg_y: usize,
}

impl From<BoundsJson> for SearchBounds {
    fn from(b: BoundsJson) -> SearchBounds {
        SearchBounds {
            deg_x: b.deg_x,
            deg_y: b.deg_y,
        }
    }
}

impl From<SearchBounds> for BoundsJson {
    fn from(b: SearchBounds) -> BoundsJson {
        BoundsJson {
            deg_x: b.deg_x,
            deg_y: b.deg_y,
        }
    }
}

/// Input of `isom-search`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub curve: CurveJson,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "G")]
    pub g: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
}

impl SearchFile {
    pub fn load(&self) -> Result<(GramMatrix, GramMatrix)> {
        check_version(self.schema)?;
        let curve = self.curve.to_curve()?;
        Ok((
            GramMatrix::new(matrix_from_json(&curve, &self.f)?)?,
            GramMatrix::new(matrix_from_json(&curve, &self.g)?)?,
        ))
    }
}

/// Input of `form`: one Gram matrix, optionally a second one to compare locally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub curve: CurveJson,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MatrixJson>,
}

impl FormFile {
    pub fn load(&self) -> Result<(GramMatrix, Option<GramMatrix>)> {
        check_version(self.schema)?;
        let curve = self.curve.to_curve()?;
        let f = GramMatrix::new(matrix_from_json(&curve, &self.f)?)?;
        let g = match &self.g {
            Some(g) => Some(GramMatrix::new(matrix_from_json(&curve, g)?)?),
            None => None,
        };
        Ok((f, g))
    }
}

/// Parses a JSON document, mapping serde errors to [`Error::Parse`].
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
