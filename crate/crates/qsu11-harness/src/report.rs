use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qsu11::Verdict;
use serde::Serialize;
use serde_json::Value;

use crate::config::{RunConfig, Suite};
use crate::HarnessError;

/// Tag naming the statement a row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Anchor {
    #[serde(rename = "Eq4.1")]
    ThetaShift,
    #[serde(rename = "Eq5.2")]
    PrefactorChain,
    #[serde(rename = "Sec4.cq")]
    CqNormalization,
    #[serde(rename = "PropB2.Case1")]
    Case1,
    #[serde(rename = "PropB2.Case2")]
    Case2,
    #[serde(rename = "PropB2.Case3")]
    Case3,
    #[serde(rename = "PropB2.uniform")]
    Uniform,
    #[serde(rename = "Prop6.1(2)")]
    Periodicity,
    #[serde(rename = "Prop6.1.real")]
    Reality,
    #[serde(rename = "Prop6.1.unitary")]
    Contraction,
    #[serde(rename = "LemB1")]
    StableRatio,
    #[serde(rename = "Thm5.2")]
    Coamenability,
    #[serde(rename = "Sec7")]
    Smoothing,
    #[serde(rename = "Eq7.1")]
    PathIndependence,
    #[serde(rename = "Thm6.3")]
    ApproxIdentity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub suite: Suite,
    pub check_id: String,
    pub paper_anchor: Anchor,
    pub param_json: String,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub deviation: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl Row {
    fn build(
        suite: Suite,
        id: impl Into<String>,
        anchor: Anchor,
        params: Value,
        value: Option<Complex64>,
        deviation: f64,
        threshold: f64,
        pass: bool,
    ) -> Row {
        Row {
            suite,
            check_id: id.into(),
            paper_anchor: anchor,
            param_json: params.to_string(),
            value_re: value.map(|v| v.re),
            value_im: value.map(|v| v.im),
            deviation,
            threshold,
            verdict: Verdict::from_bool(pass),
        }
    }

    /// Passes when `deviation < threshold`.
    pub fn below(
        suite: Suite,
        id: impl Into<String>,
        anchor: Anchor,
        params: Value,
        value: Option<Complex64>,
        deviation: f64,
        threshold: f64,
    ) -> Row {
        let pass = deviation < threshold;
        Self::build(suite, id, anchor, params, value, deviation, threshold, pass)
    }

    /// Passes when `deviation ≤ threshold`.
    pub fn at_most(
        suite: Suite,
        id: impl Into<String>,
        anchor: Anchor,
        params: Value,
        value: Option<Complex64>,
        deviation: f64,
        threshold: f64,
    ) -> Row {
        let pass = deviation <= threshold;
        Self::build(suite, id, anchor, params, value, deviation, threshold, pass)
    }

    /// A check whose evaluation failed; the message goes into the parameters.
    pub fn failed(
        suite: Suite,
        id: impl Into<String>,
        anchor: Anchor,
        mut params: Value,
        threshold: f64,
        err: &qsu11::Error,
    ) -> Row {
        if let Value::Object(map) = &mut params {
            map.insert("error".into(), Value::String(err.to_string()));
        }
        Self::build(suite, id, anchor, params, None, f64::INFINITY, threshold, false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub q: f64,
    pub tolerances: Tolerances,
    pub version: &'static str,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub tol_quad: f64,
    pub series_tol: f64,
    pub max_exponent: u32,
    pub max_terms: usize,
}

impl Header {
    pub fn new(cfg: &RunConfig, warnings: Vec<String>) -> Self {
        Header {
            q: cfg.q,
            tolerances: Tolerances {
                tol: cfg.tol,
                tol_quad: cfg.tol_quad,
                series_tol: cfg.series_tol(),
                max_exponent: cfg.max_exponent,
                max_terms: cfg.max_terms,
            },
            version: env!("CARGO_PKG_VERSION"),
            warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub rows: Vec<Row>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.verdict.is_pass()).count()
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.failures() == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub suite: Suite,
    pub rows: usize,
    pub failed: usize,
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    header: &'a Header,
    suite: Suite,
    rows: &'a [Row],
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    header: &'a Header,
    suites: &'a [SummaryRow],
    verdict: Verdict,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Writes one report per suite in the requested formats and returns the
/// paths written.
pub fn write_suite(
    dir: &Path,
    cfg: &RunConfig,
    header: &Header,
    report: &SuiteReport,
) -> Result<Vec<PathBuf>, HarnessError> {
    let mut out = Vec::new();
    let stem = report.suite.name();
    if cfg.format.csv() {
        let p = dir.join(format!("{stem}.csv"));
        write_csv(&p, &report.rows)?;
        out.push(p);
    }
    if cfg.format.json() {
        let p = dir.join(format!("{stem}.json"));
        write_json(
            &p,
            &JsonReport {
                header,
                suite: report.suite,
                rows: &report.rows,
            },
        )?;
        out.push(p);
    }
    Ok(out)
}

pub fn write_summary(
    dir: &Path,
    cfg: &RunConfig,
    header: &Header,
    summary: &[SummaryRow],
) -> Result<Vec<PathBuf>, HarnessError> {
    let mut out = Vec::new();
    if cfg.format.csv() {
        let p = dir.join("summary.csv");
        write_csv(&p, summary)?;
        out.push(p);
    }
    if cfg.format.json() {
        let p = dir.join("summary.json");
        let verdict = Verdict::from_bool(summary.iter().all(|s| s.verdict.is_pass()));
        write_json(
            &p,
            &JsonSummary {
                header,
                suites: summary,
                verdict,
            },
        )?;
        out.push(p);
    }
    Ok(out)
}
