//! The four subcommands. Each returns the rendered report and whether the
//! run passed; the binary maps that to the exit code.

use std::path::Path;

use bjortho::approx::{certification_zero_tol, L1Characterization, LpCharacterization};
use bjortho::{
    best_approx, bj_criterion, bj_direct, check_l1_characterization, check_lp_characterization, ApproxResult,
    BochnerFunction, CriterionChoice, OrthoCertificate, SubspaceBasis,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::repro::{reproduce, Example};
use crate::suites::{run_suite, Suite, ORACLE_TOL};

/// Rendered output of a command and its pass/fail status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Reads and decodes a JSON input file; decoding errors keep their
/// line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckInput {
    pub f: BochnerFunction,
    pub g: BochnerFunction,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub criterion: Option<CriterionChoice>,
    #[serde(default)]
    pub eps_zero: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub p: f64,
    pub criterion: OrthoCertificate,
    pub oracle: OrthoCertificate,
    pub agreement: bool,
}

/// Settings of `check` that may come from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub p: Option<f64>,
    pub criterion: Option<CriterionChoice>,
    pub tol: Option<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-9;

fn require_tol(tol: f64) -> CliResult<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("tol must be positive, got {tol}")))
    }
}

/// Runs the selected criterion and the direct oracle on `f`, `g`.
/// Command-line options take precedence over fields of the input.
pub fn check(input: &CheckInput, opts: CheckOptions) -> CliResult<CheckReport> {
    let p = opts
        .p
        .or(input.p)
        .ok_or_else(|| CliError::Usage("no exponent: pass --p or set \"p\" in the input".into()))?;
    let tol = require_tol(opts.tol.unwrap_or(DEFAULT_TOL))?;
    let choice = opts.criterion.or(input.criterion).unwrap_or(CriterionChoice::Auto);
    let criterion = bj_criterion(choice, &input.f, &input.g, p, input.eps_zero.unwrap_or(0.0), tol)?;
    let oracle = bj_direct(&input.f, &input.g, p, tol.min(ORACLE_TOL))?;
    Ok(CheckReport {
        p,
        agreement: criterion.verdict == oracle.verdict,
        criterion,
        oracle,
    })
}

/// Disagreement inside the borderline band is reported but not a failure.
pub fn cmd_check(path: &Path, opts: CheckOptions, format: Format) -> CliResult<Outcome> {
    let input: CheckInput = read_json(path)?;
    let rep = check(&input, opts)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["criterion", "p", "verdict_criterion", "verdict_oracle", "lhs", "rhs", "margin", "borderline", "agreement"])?;
            let c = &rep.criterion;
            w.serialize((
                c.criterion.to_string(),
                rep.p,
                c.verdict.to_string(),
                rep.oracle.verdict.to_string(),
                c.lhs,
                c.rhs,
                c.margin(),
                c.borderline,
                rep.agreement,
            ))?;
            csv_string(w)?
        }
    };
    Ok(Outcome {
        text,
        passed: rep.agreement || rep.criterion.borderline,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxInput {
    pub f: BochnerFunction,
    pub basis: Vec<BochnerFunction>,
    #[serde(default)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Characterization {
    L1(L1Characterization),
    Lp(LpCharacterization),
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub p: f64,
    pub result: ApproxResult,
    pub characterization: Characterization,
}

/// Best approximation of `f` from the span of the basis, with the matching
/// characterization re-checked on the result.
pub fn approx(input: &ApproxInput, p: Option<f64>, tol: Option<f64>) -> CliResult<ApproxReport> {
    let p = p
        .or(input.p)
        .ok_or_else(|| CliError::Usage("no exponent: pass --p or set \"p\" in the input".into()))?;
    let tol = require_tol(tol.unwrap_or(DEFAULT_TOL))?;
    let basis = SubspaceBasis::new(input.basis.clone())?;
    let result = best_approx(&input.f, &basis, p, tol)?;
    let eps = certification_zero_tol(&input.f);
    let characterization = if p == 1.0 {
        Characterization::L1(check_l1_characterization(&input.f, &result.g0, &basis, eps, tol)?)
    } else {
        Characterization::Lp(check_lp_characterization(&input.f, &result.g0, &basis, p, eps, tol)?)
    };
    Ok(ApproxReport {
        p,
        result,
        characterization,
    })
}

/// An uncertified solve is an error with exit code 1.
pub fn cmd_approx(path: &Path, p: Option<f64>, tol: Option<f64>, format: Format) -> CliResult<Outcome> {
    let input: ApproxInput = read_json(path)?;
    let rep = approx(&input, p, tol)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "coefficient_re", "coefficient_im", "residual", "scale", "certified"])?;
            let r = &rep.result;
            for (i, c) in r.coefficients.iter().enumerate() {
                w.serialize((i, c.re, c.im, r.optimality_residuals[i], r.residual_scales[i], r.certified))?;
            }
            csv_string(w)?
        }
    };
    Ok(Outcome {
        text,
        passed: rep.result.certified,
    })
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> CliResult<Outcome> {
    let rep = run_suite(suite, cfg)?;
    Ok(Outcome {
        text: rep.render(cfg.format)?,
        passed: rep.passed,
    })
}

pub fn cmd_repro(example: Example, format: Format) -> CliResult<Outcome> {
    let rep = reproduce(example)?;
    Ok(Outcome {
        text: rep.render(format)?,
        passed: rep.passed,
    })
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
