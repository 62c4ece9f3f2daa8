//! File formats and report documents.
//!
//! Every emitted document is self-describing: it carries a schema version
//! field and an explicit field description, so nothing downstream has to
//! scrape human-readable text. Field elements serialize as bare integer
//! representatives for prime fields and as coefficient lists for proper
//! extensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{Matrix, Point};
use crate::pattern::{FullRankReport, PatternSpec, PointSet, Witness};
use crate::tensor::DiagonalityReport;

pub const SCHEMA: &str = "patternlab/v1";

/// One field element on the wire: integer for m = 1, coefficient list
/// (low-to-high) for m > 1.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ElemRepr {
    Int(u64),
    Coeffs(Vec<u64>),
}

pub fn elem_to_repr(field: &FieldSpec, e: &FieldElement) -> ElemRepr {
    if field.degree() == 1 {
        ElemRepr::Int(e.coeffs()[0])
    } else {
        ElemRepr::Coeffs(e.coeffs().to_vec())
    }
}

pub fn elem_from_repr(field: &FieldSpec, r: &ElemRepr) -> Result<FieldElement> {
    match r {
        ElemRepr::Int(v) => {
            if field.degree() == 1 {
                Ok(field.from_int(*v as i64))
            } else {
                // allow scalar shorthand in extension fields
                Ok(field.from_int(*v as i64))
            }
        }
        ElemRepr::Coeffs(cs) => field.element(cs),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldFile {
    pub p: u64,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldFile {
    pub fn from_spec(f: &FieldSpec) -> Self {
        FieldFile {
            p: f.p(),
            m: f.degree(),
            modulus: if f.degree() == 1 {
                None
            } else {
                Some(f.modulus().to_vec())
            },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p, self.m, self.modulus.clone())
    }
}

/// Pattern-spec file: field, block dimension, and the generator matrices as
/// row-major nested lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub schema: String,
    pub field: FieldFile,
    pub k: usize,
    pub generators: Vec<Vec<Vec<ElemRepr>>>,
}

impl PatternFile {
    pub fn from_pattern(p: &PatternSpec) -> Self {
        let f = p.field();
        let generators = p
            .generators()
            .iter()
            .map(|m| {
                (0..m.k())
                    .map(|i| {
                        (0..m.k())
                            .map(|j| elem_to_repr(f, m.entry(i, j)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        PatternFile {
            schema: SCHEMA.to_string(),
            field: FieldFile::from_spec(f),
            k: p.k(),
            generators,
        }
    }

    pub fn to_pattern(&self) -> Result<PatternSpec> {
        let field = self.field.to_spec()?;
        let mut gens = Vec::new();
        for rows in &self.generators {
            if rows.len() != self.k || rows.iter().any(|r| r.len() != self.k) {
                return Err(Error::MalformedInput(format!(
                    "generator is not a {0}x{0} matrix",
                    self.k
                )));
            }
            let mut entries = Vec::with_capacity(self.k * self.k);
            for row in rows {
                for cell in row {
                    entries.push(elem_from_repr(&field, cell)?);
                }
            }
            gens.push(Matrix::new(field.clone(), self.k, entries)?);
        }
        PatternSpec::new(field, gens)
    }
}

/// Point-set file. The field and k are written on every emitted file; on
/// input they may be omitted when the surrounding command already fixes the
/// ambient pattern.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetFile {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub n: usize,
    /// each point as its k·n coordinates in block-major order
    pub points: Vec<Vec<ElemRepr>>,
}

impl PointSetFile {
    pub fn from_set(s: &PointSet) -> Self {
        let f = s.field();
        PointSetFile {
            schema: SCHEMA.to_string(),
            field: Some(FieldFile::from_spec(f)),
            k: Some(s.k()),
            n: s.n(),
            points: s
                .members()
                .iter()
                .map(|p| p.coords().iter().map(|c| elem_to_repr(f, c)).collect())
                .collect(),
        }
    }

    pub fn to_set(&self, ambient: Option<(&FieldSpec, usize)>) -> Result<PointSet> {
        let (field, k) = match (&self.field, self.k, ambient) {
            (Some(ff), Some(k), _) => (ff.to_spec()?, k),
            (Some(ff), None, Some((_, k))) => (ff.to_spec()?, k),
            (None, k, Some((f, ak))) => (f.clone(), k.unwrap_or(ak)),
            _ => {
                return Err(Error::MalformedInput(
                    "point-set file lacks field/k and no ambient pattern was given".into(),
                ))
            }
        };
        let mut pts = Vec::new();
        for coords in &self.points {
            if coords.len() != k * self.n {
                return Err(Error::MalformedInput(format!(
                    "point has {} coordinates, expected k*n = {}",
                    coords.len(),
                    k * self.n
                )));
            }
            let elems: Result<Vec<FieldElement>> =
                coords.iter().map(|c| elem_from_repr(&field, c)).collect();
            pts.push(Point::new(field.clone(), k, self.n, elems?)?);
        }
        PointSet::from_points(&field, k, self.n, pts)
    }
}

fn point_to_repr(p: &Point) -> Vec<ElemRepr> {
    let f = p.field();
    p.coords().iter().map(|c| elem_to_repr(f, c)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateDoc {
    pub schema: String,
    pub full_rank: bool,
    pub generator_dets: Vec<ElemRepr>,
    pub difference_dets: Vec<DifferenceDet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferenceDet {
    pub i: usize,
    pub j: usize,
    pub det: ElemRepr,
}

impl ValidateDoc {
    pub fn new(field: &FieldSpec, report: &FullRankReport) -> Self {
        ValidateDoc {
            schema: SCHEMA.to_string(),
            full_rank: report.full_rank,
            generator_dets: report
                .generator_dets
                .iter()
                .map(|d| elem_to_repr(field, d))
                .collect(),
            difference_dets: report
                .difference_dets
                .iter()
                .map(|(i, j, d)| DifferenceDet {
                    i: *i,
                    j: *j,
                    det: elem_to_repr(field, d),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundDoc {
    pub schema: String,
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_star: Option<f64>,
    pub c_value: f64,
    pub boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_bound: Option<f64>,
    pub log_analytic_bound: f64,
    /// decimal strings: these are arbitrary-precision integers
    pub exact_count: String,
    pub exact_bound: String,
    pub exponential_saving: bool,
}

impl BoundDoc {
    pub fn new(rep: &crate::bounds::BoundReport) -> Self {
        BoundDoc {
            schema: SCHEMA.to_string(),
            q: rep.q,
            k: rep.k,
            n: rep.n,
            r: rep.r,
            m: rep.m,
            x_star: rep.x_star,
            c_value: rep.c_value,
            boundary: rep.boundary,
            analytic_bound: rep.analytic_bound,
            log_analytic_bound: rep.log_analytic_bound,
            exact_count: rep.exact_count.to_string(),
            exact_bound: rep.exact_bound.to_string(),
            exponential_saving: rep.exponential_saving,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchDoc {
    pub schema: String,
    pub mode: String,
    pub size: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub certified: bool,
    pub set: PointSetFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyDoc {
    pub schema: String,
    pub avoiding: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<ElemRepr>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<ElemRepr>>,
}

impl CertifyDoc {
    pub fn new(witness: Option<&Witness>) -> Self {
        CertifyDoc {
            schema: SCHEMA.to_string(),
            avoiding: witness.is_none(),
            witness: witness.map(|w| w.points.iter().map(point_to_repr).collect()),
            d: witness.map(|w| point_to_repr(&w.d)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalityDoc {
    pub schema: String,
    pub evaluations: u128,
    pub diagonal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offender: Option<Vec<Vec<ElemRepr>>>,
}

impl DiagonalityDoc {
    pub fn new(rep: &DiagonalityReport) -> Self {
        DiagonalityDoc {
            schema: SCHEMA.to_string(),
            evaluations: rep.evaluations,
            diagonal: rep.diagonal,
            offender: rep
                .offender
                .as_ref()
                .map(|pts| pts.iter().map(point_to_repr).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountDoc {
    pub schema: String,
    pub kind: String,
    pub count: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryDoc {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equilateral: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spread: Option<ElemRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq_dists: Option<Vec<ElemRepr>>,
}
