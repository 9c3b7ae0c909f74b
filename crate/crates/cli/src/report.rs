//! Trial records and their JSON / CSV renderings.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliResult;

/// One trial of a randomized suite.
///
/// `lhs`, `rhs` and `margin = rhs − lhs` are the two sides of the check the
/// suite makes; `violation` is how far a failing trial is on the wrong side
/// (relative to its scale) and zero otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub suite: String,
    pub trial: usize,
    pub p: f64,
    pub dim: usize,
    pub atoms: usize,
    pub verdict_criterion: String,
    pub verdict_oracle: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub borderline: bool,
    pub passed: bool,
    pub violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The fixed CSV columns.
#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    trial: usize,
    p: f64,
    dim: usize,
    atoms: usize,
    verdict_criterion: &'a str,
    verdict_oracle: &'a str,
    lhs: f64,
    rhs: f64,
    margin: f64,
}

impl<'a> From<&'a TrialRecord> for CsvRow<'a> {
    fn from(r: &'a TrialRecord) -> Self {
        CsvRow {
            suite: &r.suite,
            trial: r.trial,
            p: r.p,
            dim: r.dim,
            atoms: r.atoms,
            verdict_criterion: &r.verdict_criterion,
            verdict_oracle: &r.verdict_oracle,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub p_list: Vec<f64>,
    pub tol: f64,
    pub failures: usize,
    pub borderline_excluded: usize,
    pub max_margin_violation: f64,
    pub passed: bool,
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn from_records(suite: &str, seed: u64, p_list: &[f64], tol: f64, records: Vec<TrialRecord>) -> Self {
        let failures = records.iter().filter(|r| !r.passed).count();
        SuiteReport {
            suite: suite.to_string(),
            seed,
            trials: records.len(),
            p_list: p_list.to_vec(),
            tol,
            failures,
            borderline_excluded: records.iter().filter(|r| r.borderline).count(),
            max_margin_violation: records.iter().map(|r| r.violation).fold(0.0, f64::max),
            passed: failures == 0,
            records,
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => records_csv(&self.records),
        }
    }
}

pub fn records_csv(records: &[TrialRecord]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(["suite", "trial", "p", "dim", "atoms", "verdict_criterion", "verdict_oracle", "lhs", "rhs", "margin"])?;
    }
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
