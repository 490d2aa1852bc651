//! JSON forms of operators, projections, families, certificates and graded data.
//!
//! Matrices are stored row-major as separate real and imaginary parts.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::families::{Grid, SampledFamily};
use crate::graded::{Grading, SymbolPoint, SymbolSample};
use crate::linalg::{CMatrix, Complex64};
use crate::opcore::{ProjectionMatrix, Sign, TailDescriptor, TailKind, TailType, TruncatedOperator};
use crate::sections::{SectionCertificate, TrivializerCheck, TrivializerRecord};
use crate::{Error, Result};

/// Parses JSON, reporting the line and column of malformed input.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

fn split(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

fn join(rows: usize, cols: usize, re: &[Vec<f64>], im: Option<&[Vec<f64>]>, what: &str) -> Result<CMatrix> {
    let shape_ok = |m: &[Vec<f64>]| m.len() == rows && m.iter().all(|r| r.len() == cols);
    if !shape_ok(re) {
        return Err(Error::Parse(format!("{what}: \"re\" is not {rows}x{cols}")));
    }
    if let Some(im) = im {
        if !shape_ok(im) {
            return Err(Error::Parse(format!("{what}: \"im\" is not {rows}x{cols}")));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |m| m[i][j]))
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (re, im) = split(m);
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            re,
            im: Some(im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        join(self.rows, self.cols, &self.re, self.im.as_deref(), "matrix")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailJson {
    /// `positive_growth`, `negative_growth` or `mixed_signed`.
    pub kind: String,
    #[serde(default = "polynomial")]
    pub rate: String,
    #[serde(default = "one")]
    pub exponent: f64,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_pattern: Option<Vec<Sign>>,
}

fn polynomial() -> String {
    "polynomial".into()
}

fn one() -> f64 {
    1.0
}

impl TailJson {
    pub fn from_tail(t: &TailDescriptor) -> Self {
        let (kind, sign_pattern) = match t.kind() {
            TailKind::PositiveGrowth => ("positive_growth", None),
            TailKind::NegativeGrowth => ("negative_growth", None),
            TailKind::MixedSigned { pattern } => ("mixed_signed", Some(pattern.clone())),
        };
        TailJson {
            kind: kind.into(),
            rate: polynomial(),
            exponent: t.exponent(),
            scale: t.scale(),
            sign_pattern,
        }
    }

    pub fn to_tail(&self) -> Result<TailDescriptor> {
        if self.rate != "polynomial" {
            return Err(Error::Parse(format!("unknown tail rate {:?}", self.rate)));
        }
        let kind = match self.kind.as_str() {
            "positive_growth" | "PositiveGrowth" => TailKind::PositiveGrowth,
            "negative_growth" | "NegativeGrowth" => TailKind::NegativeGrowth,
            "mixed_signed" | "MixedSigned" => TailKind::MixedSigned {
                pattern: self
                    .sign_pattern
                    .clone()
                    .ok_or_else(|| Error::Parse("mixed_signed tail needs sign_pattern".into()))?,
            },
            other => return Err(Error::Parse(format!("unknown tail kind {other:?}"))),
        };
        TailDescriptor::new(kind, self.exponent, self.scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    pub tail: TailJson,
}

impl OperatorJson {
    pub fn from_operator(a: &TruncatedOperator) -> Self {
        let (re, im) = split(a.entries());
        OperatorJson {
            dim: a.dim(),
            re,
            im: Some(im),
            tail: TailJson::from_tail(a.tail()),
        }
    }

    pub fn to_operator(&self) -> Result<TruncatedOperator> {
        let m = join(self.dim, self.dim, &self.re, self.im.as_deref(), "operator")?;
        TruncatedOperator::new(m, self.tail.to_tail()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    pub tail_type: TailType,
}

impl ProjectionJson {
    pub fn from_projection(p: &ProjectionMatrix) -> Self {
        let (re, im) = split(p.entries());
        ProjectionJson {
            dim: p.dim(),
            re,
            im: Some(im),
            tail_type: p.tail_type(),
        }
    }

    pub fn to_projection(&self) -> Result<ProjectionMatrix> {
        let m = join(self.dim, self.dim, &self.re, self.im.as_deref(), "projection")?;
        ProjectionMatrix::new(m, self.tail_type)
    }
}

/// A grid point: a number, or `"inf"` for the marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Value(f64),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridJson {
    Interval { points: Vec<PointJson> },
    Graph { labels: Vec<String>, edges: Vec<(usize, usize)> },
}

impl GridJson {
    pub fn from_grid(g: &Grid) -> Self {
        match g {
            Grid::Interval { points } => GridJson::Interval {
                points: points
                    .iter()
                    .map(|&x| {
                        if x.is_infinite() {
                            PointJson::Label("inf".into())
                        } else {
                            PointJson::Value(x)
                        }
                    })
                    .collect(),
            },
            Grid::Graph { labels, edges } => GridJson::Graph {
                labels: labels.clone(),
                edges: edges.clone(),
            },
        }
    }

    pub fn to_grid(&self) -> Result<Grid> {
        match self {
            GridJson::Interval { points } => {
                let mut xs = Vec::with_capacity(points.len());
                for p in points {
                    xs.push(match p {
                        PointJson::Value(x) => *x,
                        PointJson::Label(s) if s == "inf" || s == "+inf" => f64::INFINITY,
                        PointJson::Label(s) => {
                            return Err(Error::Parse(format!("grid point {s:?} is not a number or \"inf\"")))
                        }
                    });
                }
                Grid::interval(xs)
            }
            GridJson::Graph { labels, edges } => Grid::graph(labels.clone(), edges.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    #[serde(default)]
    pub label: String,
    pub grid: GridJson,
    pub operators: Vec<OperatorJson>,
}

impl FamilyJson {
    pub fn from_family(f: &SampledFamily) -> Self {
        FamilyJson {
            label: f.label().to_string(),
            grid: GridJson::from_grid(f.grid()),
            operators: f.operators().iter().map(OperatorJson::from_operator).collect(),
        }
    }

    /// Samples with different tails give a family without a shared tail rule.
    pub fn to_family(&self) -> Result<SampledFamily> {
        let grid = self.grid.to_grid()?;
        let ops = self
            .operators
            .iter()
            .map(OperatorJson::to_operator)
            .collect::<Result<Vec<_>>>()?;
        SampledFamily::with_varying_tails(grid, ops, self.label.clone())
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub delta: f64,
    pub verified: bool,
    pub max_violation: f64,
    pub cutoffs: Vec<f64>,
    /// `null` where no finite cutoff was found.
    pub minimal_cutoffs: Vec<Option<f64>>,
    pub proximity: Vec<f64>,
    pub lipschitz: f64,
    pub adjacent_distances: Vec<f64>,
    pub projections: Vec<ProjectionJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &SectionCertificate) -> Self {
        CertificateJson {
            delta: c.delta,
            verified: c.verified,
            max_violation: c.max_violation,
            cutoffs: c.cutoffs.clone(),
            minimal_cutoffs: c.minimal_cutoffs.iter().map(|&v| finite(v)).collect(),
            proximity: c.proximity.clone(),
            lipschitz: c.lipschitz,
            adjacent_distances: c.adjacent_distances.clone(),
            projections: c.projections.iter().map(ProjectionJson::from_projection).collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<SectionCertificate> {
        if self.projections.len() != self.cutoffs.len() {
            return Err(Error::Parse("certificate has different numbers of projections and cutoffs".into()));
        }
        Ok(SectionCertificate {
            projections: self
                .projections
                .iter()
                .map(ProjectionJson::to_projection)
                .collect::<Result<Vec<_>>>()?,
            cutoffs: self.cutoffs.clone(),
            verified: self.verified,
            max_violation: self.max_violation,
            delta: self.delta,
            minimal_cutoffs: self
                .minimal_cutoffs
                .iter()
                .map(|v| v.unwrap_or(f64::INFINITY))
                .collect(),
            proximity: self.proximity.clone(),
            lipschitz: self.lipschitz,
            adjacent_distances: self.adjacent_distances.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivializerJson {
    pub cutoffs: Vec<f64>,
    pub norm_margin: f64,
    pub all_hold: bool,
    pub checks: Vec<TrivializerCheck>,
    pub corrections: Vec<MatrixJson>,
}

impl TrivializerJson {
    pub fn from_record(r: &TrivializerRecord) -> Self {
        TrivializerJson {
            cutoffs: r.cutoffs.clone(),
            norm_margin: r.norm_margin,
            all_hold: r.all_hold(),
            checks: r.checks.clone(),
            corrections: r.corrections.iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradingJson {
    pub sigma: MatrixJson,
}

impl GradingJson {
    pub fn from_grading(g: &Grading) -> Self {
        GradingJson {
            sigma: MatrixJson::from_matrix(g.sigma()),
        }
    }

    pub fn to_grading(&self) -> Result<Grading> {
        Grading::new(self.sigma.to_matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolPointJson {
    pub tag: String,
    pub coefficients: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub points: Vec<SymbolPointJson>,
}

impl SymbolJson {
    pub fn from_sample(s: &SymbolSample) -> Self {
        SymbolJson {
            points: s
                .points
                .iter()
                .map(|p| SymbolPointJson {
                    tag: p.tag.clone(),
                    coefficients: p.coefficients.iter().map(MatrixJson::from_matrix).collect(),
                })
                .collect(),
        }
    }

    pub fn to_sample(&self) -> Result<SymbolSample> {
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let coeffs = p
                .coefficients
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<Result<Vec<_>>>()?;
            points.push(SymbolPoint::new(p.tag.clone(), coeffs)?);
        }
        Ok(SymbolSample { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::fuglede_family;

    #[test]
    fn operator_round_trip() {
        let a = TruncatedOperator::from_real_diagonal(&[-1.0, 2.0], TailDescriptor::alternating()).unwrap();
        let text = to_json(&OperatorJson::from_operator(&a));
        let back = parse::<OperatorJson>(&text).unwrap().to_operator().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn minimal_operator_schema() {
        let text = r#"{"dim": 2, "re": [[1, 0], [0, 3]], "tail": {"kind": "positive_growth", "rate": "polynomial", "exponent": 1.0}}"#;
        let a = parse::<OperatorJson>(text).unwrap().to_operator().unwrap();
        assert_eq!(a.eig().eigenvalues(), &[1.0, 3.0]);
    }

    #[test]
    fn malformed_reports_location() {
        let err = parse::<OperatorJson>("{\"dim\": 2,\n  \"re\": [[1, 0]").unwrap_err();
        assert_eq!(err.reason(), "parse_error");
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn family_round_trip_keeps_marker() {
        let fam = fuglede_family(4).unwrap();
        let json = FamilyJson::from_family(&fam);
        let back = parse::<FamilyJson>(&to_json(&json)).unwrap().to_family().unwrap();
        assert_eq!(back.grid(), fam.grid());
        assert_eq!(back.operators(), fam.operators());
    }
}
