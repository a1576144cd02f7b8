use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use ladderlab::algebra::MatrixElementTable;
use ladderlab::spectrum::SpectrumCheck;
use ladderlab::suite::{Check, SuiteReport};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub defect_rank: usize,
    pub defect_support: Vec<String>,
    pub pass: bool,
}

impl From<&Check> for CheckRow {
    fn from(c: &Check) -> Self {
        Self {
            name: c.name.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
            defect_rank: c.defect_rank,
            defect_support: c.defect_support.clone(),
            pass: c.pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRowOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
    pub branch: String,
    pub n: usize,
    pub analytic: f64,
    pub dense: Option<f64>,
    pub abs_diff: Option<f64>,
    pub detached: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnmatchedOut {
    pub value: f64,
    pub beyond_guard: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectEntry {
    pub relation: String,
    pub rank: usize,
    pub support: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientOut {
    pub operator: String,
    pub source: String,
    pub target: String,
    pub computed: [f64; 2],
    pub expected: [f64; 2],
    pub abs_diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalOut {
    pub operator: String,
    pub branch: String,
    pub n: usize,
    pub computed: f64,
    pub closed_form: f64,
    pub offset: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixElementsOut {
    pub coefficients: Vec<CoefficientOut>,
    pub diagonal: Vec<DiagonalOut>,
}

impl From<&MatrixElementTable> for MatrixElementsOut {
    fn from(t: &MatrixElementTable) -> Self {
        Self {
            coefficients: t
                .rows
                .iter()
                .map(|r| CoefficientOut {
                    operator: r.operator.clone(),
                    source: r.source.clone(),
                    target: r.target.clone(),
                    computed: [r.computed.re, r.computed.im],
                    expected: [r.expected.re, r.expected.im],
                    abs_diff: r.abs_diff,
                })
                .collect(),
            diagonal: t
                .diagonal
                .iter()
                .map(|d| DiagonalOut {
                    operator: d.operator.clone(),
                    branch: d.branch.symbol().to_string(),
                    n: d.n,
                    computed: d.computed,
                    closed_form: d.closed_form,
                    offset: d.offset,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub params: BTreeMap<String, f64>,
    pub pass: bool,
    pub failed_checks: Vec<String>,
    pub spectrum_max_abs_diff: Option<f64>,
    pub observables: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<CheckRow>,
    pub spectrum: Vec<SpectrumRowOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unmatched: Vec<UnmatchedOut>,
    pub defects: Vec<DefectEntry>,
    pub observables: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_elements: Option<MatrixElementsOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSummary>,
    pub duration_s: f64,
}

pub fn spectrum_rows(levels: &SpectrumCheck, params: Option<&BTreeMap<String, f64>>) -> Vec<SpectrumRowOut> {
    levels.rows
        .iter()
        .map(|r| SpectrumRowOut {
            params: params.cloned(),
            branch: r.kind.label().to_string(),
            n: r.n,
            analytic: r.analytic,
            dense: r.dense,
            abs_diff: r.dense.map(|_| r.abs_diff),
            detached: r.detached(),
        })
        .collect()
}

pub fn unmatched_rows(levels: &SpectrumCheck) -> Vec<UnmatchedOut> {
    levels.unmatched
        .iter()
        .map(|u| UnmatchedOut {
            value: u.value,
            beyond_guard: u.beyond_guard,
        })
        .collect()
}

pub fn defect_catalog(checks: &[CheckRow]) -> Vec<DefectEntry> {
    checks
        .iter()
        .filter(|c| c.defect_rank > 0)
        .map(|c| DefectEntry {
            relation: c.name.clone(),
            rank: c.defect_rank,
            support: c.defect_support.clone(),
        })
        .collect()
}

pub fn observables(suite: &SuiteReport) -> BTreeMap<String, f64> {
    suite.observables.iter().cloned().collect()
}

/// 17 significant digits: enough to round-trip any f64.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRowOut], sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    let keys: Vec<String> = rows
        .first()
        .and_then(|r| r.params.as_ref())
        .map(|p| p.keys().cloned().collect())
        .unwrap_or_default();
    let mut header = keys.clone();
    header.extend(["branch", "n", "analytic", "dense", "abs_diff", "detached"].map(String::from));
    w.write_record(&header).map_err(csv_error)?;
    for r in rows {
        let mut rec: Vec<String> = keys
            .iter()
            .map(|k| r.params.as_ref().and_then(|p| p.get(k)).copied().map(num).unwrap_or_default())
            .collect();
        rec.extend([
            r.branch.clone(),
            r.n.to_string(),
            num(r.analytic),
            opt(r.dense),
            opt(r.abs_diff),
            r.detached.to_string(),
        ]);
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_checks_csv<W: Write>(rows: &[CheckRow], sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["name", "residual", "tolerance", "defect_rank", "defect_support", "pass"])
        .map_err(csv_error)?;
    for c in rows {
        w.write_record([
            c.name.clone(),
            num(c.residual),
            num(c.tolerance),
            c.defect_rank.to_string(),
            c.defect_support.join(";"),
            c.pass.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
