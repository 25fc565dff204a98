//! Named algebras. Look one up with [`preset`], e.g. `preset("H_N:3")`.
//!
//! Parameterised families accept `name:n` or `name(n)`.

use std::sync::OnceLock;

use super::{Algebra, AlgebraSpec};
use crate::error::{Error, Result};
use crate::registry::Registry;

pub trait AlgebraPreset: Send + Sync {
    /// One-line description for listings.
    fn describe(&self) -> &'static str;

    /// Whether the preset takes a dimension parameter.
    fn parameterised(&self) -> bool {
        false
    }

    fn build(&self, param: Option<usize>) -> Result<Algebra>;
}

/// Structure constants of the algebra with basis `1, j, ..., j^{n-1}` and `j^n = c`.
pub fn generated_constants(n: usize, c: f64) -> Vec<Vec<Vec<f64>>> {
    let mut t = vec![vec![vec![0.0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a + b < n {
                t[a][b][a + b] = 1.0;
            } else {
                t[a][b][a + b - n] = c;
            }
        }
    }
    t
}

fn unit_first(n: usize) -> Vec<f64> {
    let mut u = vec![0.0; n];
    u[0] = 1.0;
    u
}

fn power_labels(n: usize, gen: &str) -> Vec<String> {
    (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => gen.to_string(),
            _ => format!("{gen}^{k}"),
        })
        .collect()
}

fn generated(n: usize, c: f64, gen: &str) -> Result<Algebra> {
    AlgebraSpec::builder(&generated_constants(n, c), &unit_first(n))
        .labels(power_labels(n, gen))
        .build()
}

fn need_param(param: Option<usize>, min: usize, family: &str) -> Result<usize> {
    match param {
        Some(n) if n >= min => Ok(n),
        Some(n) => Err(Error::BadPresetParameter(format!(
            "{family} needs n >= {min}, got {n}"
        ))),
        None => Err(Error::BadPresetParameter(format!("{family} needs a dimension, e.g. {family}:3"))),
    }
}

fn no_param(param: Option<usize>, name: &str) -> Result<()> {
    match param {
        None => Ok(()),
        Some(_) => Err(Error::BadPresetParameter(format!("{name} takes no parameter"))),
    }
}

struct Complex;
impl AlgebraPreset for Complex {
    fn describe(&self) -> &'static str {
        "complex numbers, i^2 = -1"
    }
    fn build(&self, param: Option<usize>) -> Result<Algebra> {
        no_param(param, "complex")?;
        generated(2, -1.0, "i")
    }
}

struct Hyperbolic;
impl AlgebraPreset for Hyperbolic {
    fn describe(&self) -> &'static str {
        "hyperbolic numbers, j^2 = 1"
    }
    fn build(&self, param: Option<usize>) -> Result<Algebra> {
        no_param(param, "hyperbolic")?;
        generated(2, 1.0, "j")
    }
}

struct Dual;
impl AlgebraPreset for Dual {
    fn describe(&self) -> &'static str {
        "dual numbers, e^2 = 0"
    }
    fn build(&self, param: Option<usize>) -> Result<Algebra> {
        no_param(param, "dual")?;
        generated(2, 0.0, "e")
    }
}

struct DirectProduct;
impl AlgebraPreset for DirectProduct {
    fn describe(&self) -> &'static str {
        "R^n with componentwise product, unity (1,...,1)"
    }
    fn parameterised(&self) -> bool {
        true
    }
    fn build(&self, param: Option<usize>) -> Result<Algebra> {
        let n = need_param(param, 2, "direct_product")?;
        let mut t = vec![vec![vec![0.0; n]; n]; n];
        for (i, plane) in t.iter_mut().enumerate() {
            plane[i][i] = 1.0;
        }
        AlgebraSpec::builder(&t, &vec![1.0; n])
            .labels((1..=n).map(|i| format!("e{i}")).collect())
            .build()
    }
}

/// `j^n = c` family: H_N (c = 1), C_N (c = -1), Gamma_N (c = 0).
struct PowerFamily {
    c: f64,
    family: &'static str,
    gen: &'static str,
    describe: &'static str,
}

impl AlgebraPreset for PowerFamily {
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn parameterised(&self) -> bool {
        true
    }
    fn build(&self, param: Option<usize>) -> Result<Algebra> {
        let n = need_param(param, 2, self.family)?;
        generated(n, self.c, self.gen)
    }
}

fn build_registry() -> Registry<dyn AlgebraPreset> {
    let mut r: Registry<dyn AlgebraPreset> = Registry::new();
    r.register("complex", Box::new(Complex))
        .register("hyperbolic", Box::new(Hyperbolic))
        .register("dual", Box::new(Dual))
        .register("direct_product", Box::new(DirectProduct))
        .register(
            "H_N",
            Box::new(PowerFamily {
                c: 1.0,
                family: "H_N",
                gen: "j",
                describe: "N-hyperbolic numbers, j^N = 1",
            }),
        )
        .register(
            "C_N",
            Box::new(PowerFamily {
                c: -1.0,
                family: "C_N",
                gen: "j",
                describe: "N-complex numbers, j^N = -1",
            }),
        )
        .register(
            "Gamma_N",
            Box::new(PowerFamily {
                c: 0.0,
                family: "Gamma_N",
                gen: "e",
                describe: "N-null numbers, e^N = 0",
            }),
        );
    r
}

pub fn preset_registry() -> &'static Registry<dyn AlgebraPreset> {
    static REG: OnceLock<Registry<dyn AlgebraPreset>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

/// Splits `H_N:3` / `H_N(3)` into name and parameter.
pub fn parse_preset_name(spec: &str) -> Result<(&str, Option<usize>)> {
    let spec = spec.trim();
    let (name, param) = if let Some((name, rest)) = spec.split_once(':') {
        (name, Some(rest))
    } else if let Some((name, rest)) = spec.split_once('(') {
        (name, Some(rest.strip_suffix(')').unwrap_or(rest)))
    } else {
        (spec, None)
    };
    let param = match param {
        None => None,
        Some(p) => Some(p.trim().parse::<usize>().map_err(|_| {
            Error::BadPresetParameter(format!("`{p}` is not a positive integer"))
        })?),
    };
    Ok((name.trim(), param))
}

pub fn preset(spec: &str) -> Result<Algebra> {
    let (name, param) = parse_preset_name(spec)?;
    preset_registry()
        .get(name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?
        .build(param)
}

/// Hamilton's quaternions. Not a registered preset (noncommutative); used to
/// exercise code paths that must not assume commutativity.
pub fn quaternions() -> Algebra {
    // basis 1, i, j, k
    let mut t = vec![vec![vec![0.0; 4]; 4]; 4];
    let table: [[(usize, f64); 4]; 4] = [
        [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
        [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
        [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
        [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
    ];
    for (a, row) in table.iter().enumerate() {
        for (b, &(k, s)) in row.iter().enumerate() {
            t[a][b][k] = s;
        }
    }
    AlgebraSpec::builder(&t, &[1.0, 0.0, 0.0, 0.0])
        .labels(vec!["1".into(), "i".into(), "j".into(), "k".into()])
        .build()
        .expect("quaternion table is associative")
}
