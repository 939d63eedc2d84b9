//! Verification harness for `qsu11`.
//!
//! [`run`] evaluates the selected suites on deterministic grids and writes
//! one report per suite plus a summary. Every row records a deviation, the
//! threshold it was held to and a verdict.

pub mod config;
pub mod report;
pub mod suites;

use std::fs;
use std::path::PathBuf;

pub use config::{Format, RunConfig, Suite, CALIBRATED_Q};
pub use report::{Anchor, Header, Row, SuiteReport, SummaryRow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub warnings: Vec<String>,
    pub summary: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.verdict.is_pass())
    }

    /// 0 when every row passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Validates `cfg`, runs its suites in declared order and writes the
/// reports. Nothing is written when the configuration is invalid.
pub fn run(cfg: &RunConfig) -> Result<Outcome, HarnessError> {
    let warnings = cfg.validate()?;
    let header = Header::new(cfg, warnings.clone());
    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", cfg.out_dir.display())))?;

    let mut files = Vec::new();
    let mut summary = Vec::new();
    for suite in cfg.ordered_suites() {
        let rows = suites::run(suite, cfg).map_err(|e| HarnessError::Config(e.to_string()))?;
        let report = SuiteReport { suite, rows };
        files.extend(report::write_suite(&cfg.out_dir, cfg, &header, &report)?);
        summary.push(SummaryRow {
            suite,
            rows: report.rows.len(),
            failed: report.failures(),
            verdict: report.verdict(),
        });
    }
    files.extend(report::write_summary(&cfg.out_dir, cfg, &header, &summary)?);
    Ok(Outcome {
        warnings,
        summary,
        files,
    })
}
