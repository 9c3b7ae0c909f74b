use std::path::PathBuf;
use std::process::ExitCode;

use bjortho::CriterionChoice;
use bjortho_cli::commands::{cmd_approx, cmd_check, cmd_repro, cmd_verify, CheckOptions, Outcome};
use bjortho_cli::config::{parse_p_list, Format, RunConfig};
use bjortho_cli::error::{CliError, CliResult};
use bjortho_cli::report::emit;
use bjortho_cli::repro::Example;
use bjortho_cli::suites::Suite;
use clap::{Parser, Subcommand};

/// Birkhoff–James orthogonality and best approximation in discrete
/// Lebesgue–Bochner spaces.
///
/// Exit status: 0 when everything passed, 1 on a failed property or an
/// uncertified result, 2 on usage or input errors.
#[derive(Debug, Parser)]
#[command(name = "bjortho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Exponent, or a comma-separated list for `verify`.
    #[arg(long, global = true)]
    p: Option<String>,

    /// Decision tolerance (default 1e-9 for check/approx, 1e-6 for verify).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Trials for `verify`: per exponent for thm-tensor-p and approx, per
    /// space kind for duality-map, in total for crit-vs-oracle and light.
    #[arg(long, global = true)]
    trials: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// auto, l1, lp, scalar-l1, scalar-lp, keckic or direct.
    #[arg(long, global = true)]
    criterion: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide f ⊥ g for a JSON input {"f", "g", "p"?, "criterion"?, "eps_zero"?}.
    Check { input: PathBuf },
    /// Best approximation for a JSON input {"f", "basis", "p"?}.
    Approx { input: PathBuf },
    /// Run a seeded property suite: thm-tensor-p, crit-vs-oracle, light,
    /// approx or duality-map.
    Verify { suite: String },
    /// Reproduce a worked example: tensor-hilbert or tensor-l1l1.
    Repro { example: String },
}

const DEFAULT_SUITE_TOL: f64 = 1e-6;

fn single_p(p: &Option<String>) -> CliResult<Option<f64>> {
    p.as_deref()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--p expects a single number here, got {s:?}")))
        })
        .transpose()
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let format: Format = cli.format.parse()?;
    let criterion = cli
        .criterion
        .as_deref()
        .map(|s| s.parse::<CriterionChoice>().map_err(|e| CliError::Usage(e.to_string())))
        .transpose()?;
    match &cli.command {
        Command::Check { input } => {
            let opts = CheckOptions {
                p: single_p(&cli.p)?,
                criterion,
                tol: cli.tol,
            };
            cmd_check(input, opts, format)
        }
        Command::Approx { input } => cmd_approx(input, single_p(&cli.p)?, cli.tol, format),
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let p_list = match &cli.p {
                Some(s) => parse_p_list(s)?,
                None => suite.default_p_list(),
            };
            let mut cfg = RunConfig::new(
                cli.seed,
                cli.trials.unwrap_or(suite.default_trials()),
                cli.tol.unwrap_or(DEFAULT_SUITE_TOL),
                p_list,
            )?;
            cfg.format = format;
            cfg.output = cli.out.clone();
            cmd_verify(suite, &cfg)
        }
        Command::Repro { example } => cmd_repro(example.parse::<Example>()?, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&outcome.text, cli.out.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("bjortho: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
