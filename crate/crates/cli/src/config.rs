use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format {other:?} (expected json or csv)"))),
        }
    }
}

/// Settings shared by the randomized suites.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Trials per exponent (thm-tensor-p, approx), per space kind
    /// (duality-map), or in total cycling through the exponents
    /// (crit-vs-oracle, light).
    pub trials: usize,
    pub tol: f64,
    pub p_list: Vec<f64>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(seed: u64, trials: usize, tol: f64, p_list: Vec<f64>) -> CliResult<Self> {
        let cfg = RunConfig {
            seed,
            trials,
            tol,
            p_list,
            output: None,
            format: Format::Json,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("tol must be positive, got {}", self.tol)));
        }
        if self.p_list.is_empty() {
            return Err(CliError::Usage("empty exponent list".into()));
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p >= 1.0 && p.is_finite())) {
            return Err(CliError::Usage(format!("every p must satisfy 1 ≤ p < ∞, got {p}")));
        }
        Ok(())
    }
}

/// Parses `1.5,2,3`.
pub fn parse_p_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad exponent {t:?} in --p")))
        })
        .collect()
}
