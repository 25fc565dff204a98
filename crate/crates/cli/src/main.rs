mod coeffs;
mod commands;
mod config;
mod integrate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use acalc_core::series::DEFAULT_ESTIMATOR;
use coeffs::{parse_spec, ParseError};
use commands::{run, Exit};
use integrate::{CurveSpec, IntegrandSpec};
use config::{parse_csv, parse_grid, AlgebraSource, Command, Format, Output, RunConfig, SliceSpec, DEFAULT_GRID};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(acalc_core::Error),
    #[error("cannot parse coefficient spec at {err}\n  {spec}\n  {caret}^", caret = " ".repeat(err.column - 1))]
    Parse { spec: String, err: ParseError },
}

#[derive(Parser, Debug)]
#[command(name = "acalc", version, about = "Numerical calculus over finite-dimensional real algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Registered preset, e.g. `hyperbolic` or `H_N:3`.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// JSON algebra file with `dim`, `unity` and `constants`.
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Exit with code 3 when a result is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate an algebra and report its norm constants and a unit census.
    Check {
        #[arg(long, default_value_t = 1000)]
        census: usize,
    },
    /// Radii of convergence and an optional evaluation.
    Series {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 200)]
        probe: usize,
        #[arg(long, default_value = DEFAULT_ESTIMATOR)]
        estimator: String,
    },
    /// Convergence verdicts on a grid over a 2-D affine slice.
    Region {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        slice: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Check elementary-function identities and the Pythagorean determinant.
    Identities {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Integral of a function along a curve: segment(A; B), circle(C; r; i,j) or polygon(P1; P2; ...).
    Integrate {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Named integrand: one, identity, square, inverse, conj, exp, sin, cos, sinh, cosh.
        #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
        function: Option<String>,
        /// Integrate the sum of a power series instead of a named function.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
}

const INTEGRAND_SERIES_TOL: f64 = 1e-14;

fn coords(text: &Option<String>, flag: &str) -> Result<Option<Vec<f64>>, CliError> {
    text.as_deref()
        .map(|t| parse_csv(t).map_err(|e| CliError::Input(format!("--{flag}: {e}"))))
        .transpose()
}

fn spec(text: &str) -> Result<coeffs::CoeffSpec, CliError> {
    parse_spec(text).map_err(|err| CliError::Parse {
        spec: text.to_string(),
        err,
    })
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let g = cli.global;
        let algebra_source = match (g.preset, g.algebra) {
            (Some(p), None) => AlgebraSource::Preset(p),
            (None, Some(f)) => AlgebraSource::File(f),
            (Some(_), Some(_)) => return Err(CliError::Input("give either --preset or --algebra, not both".into())),
            (None, None) => return Err(CliError::Input("an algebra is required: --preset NAME or --algebra FILE".into())),
        };
        if let Some(t) = g.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!("--tol must be positive, got {t}")));
            }
        }
        let default_format = if matches!(cli.command, Cmd::Region { .. }) { Format::Csv } else { Format::Json };
        let command = match cli.command {
            Cmd::Check { census } => Command::Check { census_samples: census },
            Cmd::Series {
                coeffs,
                point,
                center,
                probe,
                estimator,
            } => Command::Series {
                spec: spec(&coeffs)?,
                spec_text: coeffs,
                point: crate::coords(&point, "point")?,
                center: crate::coords(&center, "center")?,
                probe,
                estimator,
            },
            Cmd::Region {
                coeffs,
                center,
                slice,
                grid,
            } => Command::Region {
                spec: spec(&coeffs)?,
                spec_text: coeffs,
                center: crate::coords(&center, "center")?,
                slice: slice
                    .as_deref()
                    .map(SliceSpec::parse)
                    .transpose()
                    .map_err(|e| CliError::Input(format!("--slice: {e}")))?
                    .unwrap_or_default(),
                grid: grid
                    .as_deref()
                    .map(parse_grid)
                    .transpose()
                    .map_err(|e| CliError::Input(format!("--grid: {e}")))?
                    .unwrap_or(DEFAULT_GRID),
            },
            Cmd::Identities { trials } => Command::Identities { trials },
            Cmd::Integrate { curve, function, coeffs } => {
                let (integrand_text, integrand) = match (function, coeffs) {
                    (Some(name), _) => (name.clone(), IntegrandSpec::Named(name)),
                    (None, Some(text)) => (
                        text.clone(),
                        IntegrandSpec::Series {
                            spec: spec(&text)?,
                            tol: g.tol.unwrap_or(INTEGRAND_SERIES_TOL),
                        },
                    ),
                    (None, None) => return Err(CliError::Input("give --function NAME or --coeffs SPEC".into())),
                };
                Command::Integrate {
                    curve: CurveSpec::parse(&curve).map_err(|e| CliError::Input(format!("--curve: {e}")))?,
                    curve_text: curve,
                    integrand_text,
                    integrand,
                }
            }
        };
        Ok(RunConfig {
            algebra_source,
            command,
            output: Output {
                path: g.out,
                format: match g.format {
                    Some(FormatArg::Csv) => Format::Csv,
                    Some(FormatArg::Json) => Format::Json,
                    None => default_format,
                },
            },
            seed: g.seed,
            tol: g.tol,
            strict: g.strict,
        })
    }
}

fn execute(cli: Cli) -> Result<Exit, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = run(&cfg)?;
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.body.as_bytes());
        }
    }
    if let Some(s) = outcome.summary {
        eprintln!("{s}");
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::Invalid as u8)
        }
    }
}
