//! Curve shapes and named integrands for the `integrate` command.

use std::sync::OnceLock;

use acalc_core::calculus::{AFunction, Curve};
use acalc_core::registry::Registry;
use acalc_core::series::SumStatus;
use acalc_core::transcendental::{cos, cosh, exp, sin, sinh, DEFAULT_TOL};
use acalc_core::{Algebra, Element, Error};

use crate::coeffs::{build_series, CoeffSpec};
use crate::config::{element_from, parse_csv};
use crate::CliError;

/// A function of one algebra variable that can be integrated along a curve.
pub trait Integrand: Send + Sync {
    fn describe(&self) -> &'static str;
    fn build(&self, alg: &Algebra) -> AFunction;
}

struct Pointwise {
    describe: &'static str,
    f: fn(&Element) -> Element,
}

impl Integrand for Pointwise {
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn build(&self, alg: &Algebra) -> AFunction {
        AFunction::new(alg, self.f)
    }
}

struct Inverse;

impl Integrand for Inverse {
    fn describe(&self) -> &'static str {
        "z^-1, fails where z is not a unit"
    }
    fn build(&self, alg: &Algebra) -> AFunction {
        AFunction::fallible(alg, |z| z.inverse())
    }
}

/// Negates every coordinate except the unity's. With the unity first this is
/// complex conjugation on the complex numbers.
struct Conjugate;

impl Integrand for Conjugate {
    fn describe(&self) -> &'static str {
        "coordinate conjugate: keeps the unity component, negates the rest"
    }
    fn build(&self, alg: &Algebra) -> AFunction {
        let unity = alg.unity().to_vec();
        let a = alg.clone();
        AFunction::new(alg, move |z| {
            let dot: f64 = z.coords().iter().zip(&unity).map(|(x, u)| x * u).sum();
            let uu: f64 = unity.iter().map(|u| u * u).sum();
            let s = 2.0 * dot / uu;
            let coords = z.coords().iter().zip(&unity).map(|(x, u)| s * u - x).collect();
            Element::new(&a, coords).expect("same dimension")
        })
    }
}

fn build_registry() -> Registry<dyn Integrand> {
    let mut r: Registry<dyn Integrand> = Registry::new();
    r.register(
        "one",
        Box::new(Pointwise {
            describe: "the unity",
            f: |z| Element::one(z.algebra()),
        }),
    )
    .register(
        "identity",
        Box::new(Pointwise {
            describe: "z",
            f: Element::clone,
        }),
    )
    .register(
        "square",
        Box::new(Pointwise {
            describe: "z * z",
            f: |z| z * z,
        }),
    )
    .register("inverse", Box::new(Inverse))
    .register("conj", Box::new(Conjugate));
    for (name, describe, f) in [
        ("exp", "exponential", (|z| exp(z, DEFAULT_TOL)) as fn(&Element) -> Element),
        ("cos", "cosine", |z| cos(z, DEFAULT_TOL)),
        ("sin", "sine", |z| sin(z, DEFAULT_TOL)),
        ("cosh", "hyperbolic cosine", |z| cosh(z, DEFAULT_TOL)),
        ("sinh", "hyperbolic sine", |z| sinh(z, DEFAULT_TOL)),
    ] {
        r.register(name, Box::new(Pointwise { describe, f }));
    }
    r
}

pub fn integrand_registry() -> &'static Registry<dyn Integrand> {
    static REG: OnceLock<Registry<dyn Integrand>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntegrandSpec {
    Named(String),
    Series { spec: CoeffSpec, tol: f64 },
}

impl IntegrandSpec {
    pub fn build(&self, alg: &Algebra) -> Result<AFunction, CliError> {
        match self {
            IntegrandSpec::Named(name) => integrand_registry().get(name).map(|i| i.build(alg)).ok_or_else(|| {
                let known: Vec<String> = integrand_registry()
                    .names()
                    .map(|n| format!("  {n}: {}", integrand_registry().get(n).expect("listed").describe()))
                    .collect();
                CliError::Input(format!("unknown function `{name}`; known functions:\n{}", known.join("\n")))
            }),
            IntegrandSpec::Series { spec, tol } => {
                let series = build_series(spec, alg).map_err(CliError::Input)?;
                let tol = *tol;
                Ok(AFunction::fallible(alg, move |z| {
                    let r = series.eval(z, tol)?;
                    match r.status {
                        SumStatus::Converged => Ok(r.value),
                        s => Err(Error::EvaluationFailure(format!(
                            "series is {s:?} at {:?}",
                            z.coords()
                        ))),
                    }
                }))
            }
        }
    }
}

/// A curve written as `segment(A; B)`, `circle(C; r; i,j)` or `polygon(P1; P2; ...)`.
///
/// Points are comma-separated coordinates, or one number for a multiple of the
/// unity. A polygon whose last vertex repeats the first is a closed loop. The
/// circle lies in the plane of basis vectors `i` and `j` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Segment(Vec<f64>, Vec<f64>),
    Circle { center: Vec<f64>, radius: f64, plane: (usize, usize) },
    Polygon(Vec<Vec<f64>>),
}

impl CurveSpec {
    pub fn parse(text: &str) -> Result<CurveSpec, String> {
        let text = text.trim();
        let (shape, rest) = text.split_once('(').ok_or("expected shape(arguments)")?;
        let body = rest.trim_end().strip_suffix(')').ok_or("missing closing `)`")?;
        let args: Vec<&str> = body.split(';').map(str::trim).collect();
        match (shape.trim(), args.as_slice()) {
            ("segment", [a, b]) => Ok(CurveSpec::Segment(parse_csv(a)?, parse_csv(b)?)),
            ("segment", _) => Err("segment takes two points: segment(A; B)".into()),
            ("circle", [c, r, plane]) => {
                let radius = r.parse::<f64>().map_err(|_| format!("`{r}` is not a radius"))?;
                let idx: Vec<usize> = plane
                    .split(',')
                    .map(|p| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a basis index")))
                    .collect::<Result<_, _>>()?;
                match idx.as_slice() {
                    [i, j] => Ok(CurveSpec::Circle {
                        center: parse_csv(c)?,
                        radius,
                        plane: (*i, *j),
                    }),
                    _ => Err("circle plane needs two basis indices".into()),
                }
            }
            ("circle", [c, r]) => CurveSpec::parse(&format!("circle({c}; {r}; 0,1)")),
            ("circle", _) => Err("circle takes circle(C; r) or circle(C; r; i,j)".into()),
            ("polygon", pts) if pts.len() >= 2 => Ok(CurveSpec::Polygon(
                pts.iter().map(|p| parse_csv(p)).collect::<Result<_, _>>()?,
            )),
            ("polygon", _) => Err("polygon needs at least two vertices".into()),
            (other, _) => Err(format!("unknown curve shape `{other}`; use segment, circle or polygon")),
        }
    }

    pub fn build(&self, alg: &Algebra) -> Result<Curve, CliError> {
        let point = |c: &Vec<f64>| element_from(alg, c, "curve point");
        Ok(match self {
            CurveSpec::Segment(a, b) => Curve::segment(&point(a)?, &point(b)?)?,
            CurveSpec::Circle { center, radius, plane } => Curve::circle(&point(center)?, *radius, plane.0, plane.1)?,
            CurveSpec::Polygon(pts) => {
                let mut vertices = pts.iter().map(point).collect::<Result<Vec<_>, _>>()?;
                let closed = vertices.len() > 2 && vertices.first() == vertices.last();
                if closed {
                    vertices.pop();
                }
                Curve::polygon(&vertices, closed)?
            }
        })
    }
}
