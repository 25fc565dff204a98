use std::sync::OnceLock;

use super::PowerSeries;
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::registry::Registry;

/// `1/n!` by repeated division.
pub fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc / k as f64)
}

/// A named coefficient family, instantiated over any algebra.
pub trait SeriesBuiltin: Send + Sync {
    fn describe(&self) -> &'static str;
    fn build(&self, algebra: &Algebra) -> Result<PowerSeries>;
}

/// Residue-class subseries of `exp`: `a_n = s^{n div N} / n!` when
/// `n mod N == p`, zero otherwise.
struct ExpResidue {
    modulus: usize,
    residue: usize,
    sign: f64,
    describe: &'static str,
}

impl SeriesBuiltin for ExpResidue {
    fn describe(&self) -> &'static str {
        self.describe
    }

    fn build(&self, algebra: &Algebra) -> Result<PowerSeries> {
        let (m, p, s) = (self.modulus, self.residue, self.sign);
        Ok(PowerSeries::real(algebra, move |n| {
            if n % m == p {
                s.powi((n / m) as i32) * inv_factorial(n)
            } else {
                0.0
            }
        }))
    }
}

struct Geometric;

impl SeriesBuiltin for Geometric {
    fn describe(&self) -> &'static str {
        "sum z^n"
    }
    fn build(&self, algebra: &Algebra) -> Result<PowerSeries> {
        Ok(super::geometric_series(algebra))
    }
}

/// `sum (1 + v_2) z^n`; on the hyperbolic numbers this is `sum (1+j) z^n`.
struct Band;

impl SeriesBuiltin for Band {
    fn describe(&self) -> &'static str {
        "sum (1 + v2) z^n, the (1+j) band series on the hyperbolic numbers"
    }
    fn build(&self, algebra: &Algebra) -> Result<PowerSeries> {
        if algebra.dim() < 2 {
            return Err(Error::InvalidArgument("band needs dimension at least 2".into()));
        }
        let base = &Element::one(algebra) + &Element::basis(algebra, 1);
        Ok(PowerSeries::scaled(&base, |_| 1.0))
    }
}

fn build_registry() -> Registry<dyn SeriesBuiltin> {
    let exp_like = |modulus, residue, sign, describe| {
        Box::new(ExpResidue {
            modulus,
            residue,
            sign,
            describe,
        })
    };
    let mut r: Registry<dyn SeriesBuiltin> = Registry::new();
    r.register("exp", exp_like(1, 0, 1.0, "sum z^n / n!"))
        .register("cosh", exp_like(2, 0, 1.0, "sum z^2n / (2n)!"))
        .register("sinh", exp_like(2, 1, 1.0, "sum z^(2n+1) / (2n+1)!"))
        .register("cos", exp_like(2, 0, -1.0, "sum (-1)^n z^2n / (2n)!"))
        .register("sin", exp_like(2, 1, -1.0, "sum (-1)^n z^(2n+1) / (2n+1)!"))
        .register("geometric", Box::new(Geometric))
        .register("band", Box::new(Band));
    r
}

pub fn builtin_registry() -> &'static Registry<dyn SeriesBuiltin> {
    static REG: OnceLock<Registry<dyn SeriesBuiltin>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

pub fn builtin_series(name: &str, algebra: &Algebra) -> Result<PowerSeries> {
    builtin_registry()
        .get(name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown builtin series `{name}`")))?
        .build(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;

    #[test]
    fn coefficients() {
        let c = preset("complex").unwrap();
        let cos = builtin_series("cos", &c).unwrap();
        let got: Vec<f64> = (0..6).map(|n| cos.coeff(n).coords()[0]).collect();
        assert_eq!(got, [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0]);
        let band = builtin_series("band", &preset("hyperbolic").unwrap()).unwrap();
        assert_eq!(band.coeff(7).coords(), &[1.0, 1.0]);
        assert!(builtin_series("tan", &c).is_err());
    }

    #[test]
    fn cos_on_real_line() {
        let c = preset("complex").unwrap();
        let cos = builtin_series("cos", &c).unwrap();
        for x in [-3.0, -1.0, 0.0, 0.5, 3.1] {
            let v = cos.eval(&Element::scalar(&c, x), 1e-16).unwrap().value;
            assert!((v.coords()[0] - f64::cos(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn names() {
        let names: Vec<_> = builtin_registry().names().collect();
        assert_eq!(names, ["band", "cos", "cosh", "exp", "geometric", "sin", "sinh"]);
    }
}
