use std::path::PathBuf;

use acalc_core::algebra::AlgebraFile;
use acalc_core::power_series::{Grid, Slice};
use acalc_core::{preset, Algebra, AlgebraSpec, Element};

use crate::coeffs::CoeffSpec;
use crate::integrate::{CurveSpec, IntegrandSpec};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraSource {
    Preset(String),
    File(PathBuf),
}

impl AlgebraSource {
    pub fn describe(&self) -> String {
        match self {
            AlgebraSource::Preset(p) => p.clone(),
            AlgebraSource::File(f) => f.display().to_string(),
        }
    }

    pub fn load(&self) -> Result<Algebra, CliError> {
        match self {
            AlgebraSource::Preset(name) => Ok(preset(name)?),
            AlgebraSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
                let file: AlgebraFile = serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("malformed algebra file {}: {e}", path.display())))?;
                Ok(AlgebraSpec::from_file(&file)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Check {
        census_samples: usize,
    },
    Series {
        spec_text: String,
        spec: CoeffSpec,
        point: Option<Vec<f64>>,
        center: Option<Vec<f64>>,
        probe: usize,
        estimator: String,
    },
    Region {
        spec_text: String,
        spec: CoeffSpec,
        center: Option<Vec<f64>>,
        slice: SliceSpec,
        grid: Grid,
    },
    Identities {
        trials: usize,
    },
    Integrate {
        curve_text: String,
        curve: CurveSpec,
        integrand_text: String,
        integrand: IntegrandSpec,
    },
}

/// Everything a run depends on; the same value always produces the same output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algebra_source: AlgebraSource,
    pub command: Command,
    pub output: Output,
    pub seed: u64,
    pub tol: Option<f64>,
    pub strict: bool,
}

pub fn parse_csv(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"))
        })
        .collect()
}

/// A single value is read as a real multiple of the unity; otherwise one
/// coordinate per basis vector is required.
pub fn element_from(alg: &Algebra, coords: &[f64], what: &str) -> Result<Element, CliError> {
    match coords {
        [r] => Ok(Element::scalar(alg, *r)),
        c if c.len() == alg.dim() => Ok(Element::new(alg, c.to_vec())?),
        c => Err(CliError::Input(format!(
            "{what} has {} coordinates; the algebra has dimension {}",
            c.len(),
            alg.dim()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SliceSpec {
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub origin: Option<Vec<f64>>,
}

impl SliceSpec {
    /// Parses `u=CSV;v=CSV;origin=CSV`; omitted parts default to the first
    /// two basis vectors and the zero element.
    pub fn parse(text: &str) -> Result<SliceSpec, String> {
        let mut s = SliceSpec::default();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value in `{part}`"))?;
            let coords = parse_csv(value)?;
            let slot = match key.trim() {
                "u" => &mut s.u,
                "v" => &mut s.v,
                "origin" => &mut s.origin,
                other => return Err(format!("unknown slice key `{other}`")),
            };
            *slot = Some(coords);
        }
        Ok(s)
    }

    pub fn build(&self, alg: &Algebra) -> Result<Slice, CliError> {
        if alg.dim() < 2 && (self.u.is_none() || self.v.is_none()) {
            return Err(CliError::Input("a one-dimensional algebra has no default slice".into()));
        }
        let exact = |c: &Option<Vec<f64>>, default: Element, what: &str| match c {
            None => Ok(default),
            Some(c) if c.len() == alg.dim() => Ok(Element::new(alg, c.clone())?),
            Some(c) => Err(CliError::Input(format!(
                "slice {what} has {} coordinates; the algebra has dimension {}",
                c.len(),
                alg.dim()
            ))),
        };
        Ok(Slice {
            origin: exact(&self.origin, Element::zero(alg), "origin")?,
            axis_u: exact(&self.u, Element::basis(alg, 0), "u")?,
            axis_v: exact(&self.v, Element::basis(alg, 1), "v")?,
        })
    }
}

pub const DEFAULT_GRID: Grid = Grid {
    u_min: -2.0,
    u_max: 2.0,
    v_min: -2.0,
    v_max: 2.0,
    nu: 81,
    nv: 81,
};

/// Parses `umin,umax,vmin,vmax,nu,nv`.
pub fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("grid needs 6 fields, got {}", parts.len()));
    }
    let f = |i: usize| parts[i].parse::<f64>().map_err(|_| format!("`{}` is not a number", parts[i]));
    let count = |i: usize| match parts[i].parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{}` is not a positive count", parts[i])),
    };
    let g = Grid {
        u_min: f(0)?,
        u_max: f(1)?,
        v_min: f(2)?,
        v_max: f(3)?,
        nu: count(4)?,
        nv: count(5)?,
    };
    if !(g.u_min <= g.u_max && g.v_min <= g.v_max) {
        return Err("grid bounds must satisfy min <= max".into());
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_slice_parsing() {
        let g = parse_grid("-1, 1, -2, 2, 3, 5").unwrap();
        assert_eq!((g.nu, g.nv, g.v_min), (3, 5, -2.0));
        assert!(parse_grid("0,1,0,1,0,2").is_err());
        assert!(parse_grid("0,1,0,1,2").is_err());
        assert!(parse_grid("1,0,0,1,2,2").is_err());

        let s = SliceSpec::parse("u=1,1; v=1,-1").unwrap();
        assert_eq!(s.u, Some(vec![1.0, 1.0]));
        assert_eq!(s.origin, None);
        assert!(SliceSpec::parse("w=1,2").is_err());
        assert!(SliceSpec::parse("u").is_err());
    }

    #[test]
    fn points() {
        let h = preset("hyperbolic").unwrap();
        assert_eq!(element_from(&h, &[0.0], "point").unwrap(), Element::zero(&h));
        assert_eq!(element_from(&h, &parse_csv("0.5,-0.5").unwrap(), "point").unwrap().coords(), &[0.5, -0.5]);
        assert!(element_from(&h, &[1.0, 2.0, 3.0], "point").is_err());
        assert!(parse_csv("1,x").is_err());
    }
}
