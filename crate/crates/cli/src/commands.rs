use acalc_core::algebra::{classify_census, GeneratedAlgebra};
use acalc_core::calculus::curve_integral;
use acalc_core::power_series::{estimate_radii_with, region_scan, RadiusOptions};
use acalc_core::series::SumStatus;
use acalc_core::transcendental::{
    identity_suite, pythagorean_report, special_functions, MAX_LEIBNIZ_DIM,
};
use acalc_core::{Algebra, Error};
use serde_json::{json, Value};

use crate::coeffs::build_series;
use crate::config::{element_from, Command, Format, RunConfig};
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// Exit codes: success, input or validation failure, inconclusive under `--strict`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Invalid = 2,
    Inconclusive = 3,
}

#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    /// One human-readable line for stderr.
    pub summary: Option<String>,
    pub exit: Exit,
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

const SERIES_TOL: f64 = 1e-12;
const REGION_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-9;
const SPECIAL_GRID_STEP: f64 = 0.05;
const PYTHAGOREAN_TRIALS: usize = 50;

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let source = cfg.algebra_source.describe();
    let alg = match cfg.algebra_source.load() {
        Ok(a) => a,
        Err(CliError::Core(e)) if matches!(cfg.command, Command::Check { .. }) => {
            let report = json!({
                "schema": SCHEMA,
                "command": "check",
                "algebra": source,
                "valid": false,
                "error": e.to_string(),
            });
            return Ok(Outcome {
                body: json_body(&report),
                summary: Some(format!("invalid algebra: {e}")),
                exit: Exit::Invalid,
            });
        }
        Err(e) => return Err(e),
    };
    match &cfg.command {
        Command::Check { census_samples } => check(cfg, &alg, &source, *census_samples),
        Command::Series {
            spec_text,
            spec,
            point,
            center,
            probe,
            estimator,
        } => {
            if cfg.output.format == Format::Csv {
                return Err(CliError::Input("series output is JSON only".into()));
            }
            let mut series = build_series(spec, &alg).map_err(CliError::Input)?;
            if let Some(c) = center {
                series = series.centered_at(&element_from(&alg, c, "center")?)?;
            }
            let opts = RadiusOptions {
                estimator: estimator.clone(),
                ..Default::default()
            };
            let radii = estimate_radii_with(&series, *probe, &opts)?;
            let tol = cfg.tol.unwrap_or(SERIES_TOL);
            let (eval, status) = match point {
                Some(p) => {
                    let z = element_from(&alg, p, "point")?;
                    let r = series.eval(&z, tol)?;
                    (json!({ "point": z, "tol": tol, "result": r }), Some(r.status))
                }
                None => (Value::Null, None),
            };
            let report = json!({
                "schema": SCHEMA,
                "command": "series",
                "algebra": source,
                "coeffs": spec_text,
                "center": series.center(),
                "real_coeffs": series.real_coeffs(),
                "unit_coeffs": series.unit_coeffs(),
                "radii": radii,
                "eval": eval,
                "warnings": series.warnings().iter().chain(alg.warnings()).collect::<Vec<_>>(),
            });
            let inconclusive = status == Some(SumStatus::Inconclusive);
            Ok(Outcome {
                body: json_body(&report),
                summary: status.map(|s| format!("eval: {s:?}")),
                exit: if cfg.strict && inconclusive { Exit::Inconclusive } else { Exit::Ok },
            })
        }
        Command::Region {
            spec_text,
            spec,
            center,
            slice,
            grid,
        } => {
            let mut series = build_series(spec, &alg).map_err(CliError::Input)?;
            if let Some(c) = center {
                series = series.centered_at(&element_from(&alg, c, "center")?)?;
            }
            let slice = slice.build(&alg)?;
            let scan = region_scan(&series, &slice, grid, cfg.tol.unwrap_or(REGION_TOL))?;
            let counts = [SumStatus::Converged, SumStatus::Diverged, SumStatus::Inconclusive].map(|s| scan.count(s));
            let body = match cfg.output.format {
                Format::Csv => scan.to_csv(),
                Format::Json => json_body(&json!({
                    "schema": SCHEMA,
                    "command": "region",
                    "algebra": source,
                    "coeffs": spec_text,
                    "slice": { "origin": slice.origin, "u": slice.axis_u, "v": slice.axis_v },
                    "grid": [grid.u_min, grid.u_max, grid.v_min, grid.v_max, grid.nu, grid.nv],
                    "counts": { "converged": counts[0], "diverged": counts[1], "inconclusive": counts[2] },
                    "verdicts": scan.verdicts.iter()
                        .map(|row| row.iter().map(|s| s.code()).collect::<String>())
                        .collect::<Vec<_>>(),
                })),
            };
            Ok(Outcome {
                body,
                summary: Some(format!(
                    "cells: {}, converged: {}, diverged: {}, inconclusive: {}",
                    grid.nu * grid.nv,
                    counts[0],
                    counts[1],
                    counts[2]
                )),
                exit: if cfg.strict && counts[2] > 0 { Exit::Inconclusive } else { Exit::Ok },
            })
        }
        Command::Identities { trials } => identities(cfg, &alg, &source, *trials),
        Command::Integrate {
            curve_text,
            curve,
            integrand_text,
            integrand,
        } => {
            if cfg.output.format == Format::Csv {
                return Err(CliError::Input("integrate output is JSON only".into()));
            }
            let f = integrand.build(&alg)?;
            let curve = curve.build(&alg)?;
            let r = curve_integral(&f, &curve)?;
            let report = json!({
                "schema": SCHEMA,
                "command": "integrate",
                "algebra": source,
                "curve": curve_text,
                "function": integrand_text,
                "closed": curve.is_closed(),
                "start": curve.start(),
                "end": curve.end(),
                "value": r.value,
                "norm": r.value.norm(),
                "panels": r.panels,
                "converged": r.converged,
                "max_norm": r.max_norm,
                "length": r.length,
                "ml_bound": r.ml_bound,
            });
            Ok(Outcome {
                body: json_body(&report),
                summary: Some(format!(
                    "integral norm {:.3e} over length {:.6} with {} panels{}",
                    r.value.norm(),
                    r.length,
                    r.panels,
                    if r.converged { "" } else { " (panel cap reached)" }
                )),
                exit: if cfg.strict && !r.converged { Exit::Inconclusive } else { Exit::Ok },
            })
        }
    }
}

fn check(cfg: &RunConfig, alg: &Algebra, source: &str, samples: usize) -> Result<Outcome, CliError> {
    if cfg.output.format == Format::Csv {
        return Err(CliError::Input("check output is JSON only".into()));
    }
    let census = classify_census(alg, samples, cfg.seed);
    let generated = GeneratedAlgebra::from_algebra(alg)
        .ok()
        .map(|g| json!({ "N": g.dim(), "c": g.power_value() }));
    let (assoc, _) = alg.associativity_residual();
    let report = json!({
        "schema": SCHEMA,
        "command": "check",
        "algebra": source,
        "valid": true,
        "dim": alg.dim(),
        "labels": alg.labels(),
        "unity": alg.unity(),
        "unity_first": alg.unity_first(),
        "commutative": alg.is_commutative(),
        "associativity_residual": assoc,
        "max_abs_constant": alg.max_abs_constant(),
        "m_theoretical": alg.m_theoretical(),
        "m_empirical": alg.m_empirical(),
        "generated": generated,
        "census": census,
        "seed": cfg.seed,
        "warnings": alg.warnings(),
    });
    Ok(Outcome {
        body: json_body(&report),
        summary: Some(format!(
            "valid algebra of dimension {}, m_empirical = {:.6}",
            alg.dim(),
            alg.m_empirical()
        )),
        exit: Exit::Ok,
    })
}

fn identities(cfg: &RunConfig, alg: &Algebra, source: &str, trials: usize) -> Result<Outcome, CliError> {
    let tol = cfg.tol.unwrap_or(IDENTITY_TOL);
    let suite = identity_suite(alg, trials, tol, cfg.seed)?;
    let generated = GeneratedAlgebra::from_algebra(alg).ok();
    let grid: Vec<f64> = (0..=80).map(|k| -2.0 + SPECIAL_GRID_STEP * k as f64).collect();
    let table = generated.as_ref().map(|g| special_functions(g, &grid)).transpose()?;

    if cfg.output.format == Format::Csv {
        let table = table.ok_or_else(|| {
            CliError::Input("CSV output of identities is the special-function table, which needs a generated algebra".into())
        })?;
        return Ok(Outcome {
            body: table.to_csv(),
            summary: Some(format!("reconstruction residual {:.2e}", table.reconstruction_residual)),
            exit: Exit::Ok,
        });
    }

    let pyth = match &generated {
        Some(g) if g.dim() <= MAX_LEIBNIZ_DIM => {
            let r = pythagorean_report(g, PYTHAGOREAN_TRIALS, cfg.seed)?;
            let passed = r.max_residual < tol;
            Some((r, passed))
        }
        _ => None,
    };
    let recon_ok = table.as_ref().is_none_or(|t| t.reconstruction_residual < tol);
    let passed = suite.passed && pyth.as_ref().is_none_or(|p| p.1) && recon_ok;

    let pyth_json = pyth.as_ref().map(|(r, ok)| {
        json!({ "algebra": source, "N": r.dim, "c": r.c, "max_residual": r.max_residual, "trials": r.trials, "passed": ok })
    });
    let note = match &generated {
        None => Some("algebra is not presented as generated by v2; Pythagorean and special-function checks skipped"),
        Some(g) if g.dim() > MAX_LEIBNIZ_DIM => Some("dimension exceeds the Leibniz determinant cap; Pythagorean check skipped"),
        _ => None,
    };
    let report = json!({
        "schema": SCHEMA,
        "command": "identities",
        "algebra": source,
        "suite": suite,
        "pythagorean": pyth_json,
        "special_functions": table.as_ref().map(|t| json!({
            "grid": format!("[-2, 2] step {SPECIAL_GRID_STEP}"),
            "reconstruction_residual": t.reconstruction_residual,
        })),
        "note": note,
        "passed": passed,
    });
    let worst = suite.identities.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Ok(Outcome {
        body: json_body(&report),
        summary: Some(format!(
            "{}: worst identity residual {worst:.2e}{}",
            if passed { "passed" } else { "FAILED" },
            pyth.map(|p| format!(", Pythagorean residual {:.2e}", p.0.max_residual)).unwrap_or_default()
        )),
        exit: if passed { Exit::Ok } else { Exit::Invalid },
    })
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
