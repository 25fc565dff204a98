use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{cos, cosh, exp, sin, sinh, DEFAULT_TOL};
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

/// Random arguments are drawn with every coordinate uniform in `[-R, R]`.
pub const SAMPLE_HALF_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    /// Largest `|lhs - rhs| / scale` over the trials.
    pub max_residual: f64,
    /// Largest `|lhs - rhs|` over the trials.
    pub max_absolute: f64,
    /// What `scale` is for this identity.
    pub scale: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub domain: String,
    pub identities: Vec<IdentityResidual>,
    pub passed: bool,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResidual> {
        self.identities.iter().find(|r| r.name == name)
    }
}

type Check = fn(&Element, &Element) -> (f64, f64);

fn rel(lhs: &Element, rhs: &Element, scale: f64) -> (f64, f64) {
    let abs = lhs.distance(rhs);
    (abs, abs / scale)
}

const CHECKS: [(&str, &str, Check); 7] = [
    ("exp(z+w) = exp(z) exp(w)", "1 + |exp(z+w)|", |z, w| {
        let lhs = exp(&(z + w), DEFAULT_TOL);
        let s = 1.0 + lhs.norm();
        rel(&lhs, &(&exp(z, DEFAULT_TOL) * &exp(w, DEFAULT_TOL)), s)
    }),
    ("exp(z) exp(-z) = 1", "1 + |exp(z)| |exp(-z)|", |z, _| {
        let (a, b) = (exp(z, DEFAULT_TOL), exp(&-z, DEFAULT_TOL));
        rel(&(&a * &b), &Element::one(z.algebra()), 1.0 + a.norm() * b.norm())
    }),
    ("exp = cosh + sinh", "1 + |exp(z)|", |z, _| {
        let e = exp(z, DEFAULT_TOL);
        let s = 1.0 + e.norm();
        rel(&e, &(&cosh(z, DEFAULT_TOL) + &sinh(z, DEFAULT_TOL)), s)
    }),
    ("cosh^2 - sinh^2 = 1", "1 + |cosh^2| + |sinh^2|", |z, _| {
        let (c, s) = (cosh(z, DEFAULT_TOL), sinh(z, DEFAULT_TOL));
        let (c2, s2) = (&c * &c, &s * &s);
        rel(&(&c2 - &s2), &Element::one(z.algebra()), 1.0 + c2.norm() + s2.norm())
    }),
    ("cos^2 + sin^2 = 1", "1 + |cos^2| + |sin^2|", |z, _| {
        let (c, s) = (cos(z, DEFAULT_TOL), sin(z, DEFAULT_TOL));
        let (c2, s2) = (&c * &c, &s * &s);
        rel(&(&c2 + &s2), &Element::one(z.algebra()), 1.0 + c2.norm() + s2.norm())
    }),
    ("cosh(z+w) = cosh cosh + sinh sinh", "1 + |cosh cosh| + |sinh sinh|", |z, w| {
        let a = &cosh(z, DEFAULT_TOL) * &cosh(w, DEFAULT_TOL);
        let b = &sinh(z, DEFAULT_TOL) * &sinh(w, DEFAULT_TOL);
        rel(&cosh(&(z + w), DEFAULT_TOL), &(&a + &b), 1.0 + a.norm() + b.norm())
    }),
    ("sin(z+w) = sin cos + sin cos", "1 + |sin(z) cos(w)| + |sin(w) cos(z)|", |z, w| {
        let a = &sin(z, DEFAULT_TOL) * &cos(w, DEFAULT_TOL);
        let b = &sin(w, DEFAULT_TOL) * &cos(z, DEFAULT_TOL);
        rel(&sin(&(z + w), DEFAULT_TOL), &(&a + &b), 1.0 + a.norm() + b.norm())
    }),
];

/// Deterministic `(z, w)` pairs with coordinates uniform in `[-2, 2]`.
pub(crate) fn sample_pairs(alg: &Algebra, trials: usize, seed: u64) -> Vec<(Element, Element)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let c = (0..alg.dim())
            .map(|_| rng.random_range(-SAMPLE_HALF_WIDTH..=SAMPLE_HALF_WIDTH))
            .collect();
        Element::new(alg, c).expect("dimension matches")
    };
    (0..trials).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

/// Evaluates the exponential, hyperbolic and circular identities at
/// `trials` seeded random pairs. Passes iff every scaled residual is `< tol`.
pub fn identity_suite(alg: &Algebra, trials: usize, tol: f64, seed: u64) -> Result<IdentityReport> {
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let pairs = sample_pairs(alg, trials, seed);
    let identities: Vec<IdentityResidual> = CHECKS
        .iter()
        .map(|&(name, scale, check)| {
            let (max_absolute, max_residual) = pairs
                .par_iter()
                .map(|(z, w)| check(z, w))
                .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
            IdentityResidual {
                name,
                max_residual,
                max_absolute,
                scale,
            }
        })
        .collect();
    let passed = identities.iter().all(|r| r.max_residual < tol);
    Ok(IdentityReport {
        trials,
        seed,
        tol,
        domain: format!("[-{SAMPLE_HALF_WIDTH}, {SAMPLE_HALF_WIDTH}]^{}", alg.dim()),
        identities,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IvpReport {
    /// Largest `|g'' + g| / (1 + |g|)` over the grid, `g''` by second
    /// central differences along the unity.
    pub ode_residual: f64,
    pub initial_value_residual: f64,
    pub initial_derivative_residual: f64,
}

/// Checks that `g(z) = f0 cos(z) + f1 sin(z)` solves `g'' = -g` with
/// `g(0) = f0` and `g'(0) = f1`.
pub fn second_order_ivp_check(f0: &Element, f1: &Element, grid: &[Element]) -> Result<IvpReport> {
    let alg = f0.algebra();
    if !f1.belongs_to(alg) || grid.iter().any(|z| !z.belongs_to(alg)) {
        return Err(Error::AlgebraMismatch);
    }
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let g = |z: &Element| &(f0 * &cos(z, DEFAULT_TOL)) + &(f1 * &sin(z, DEFAULT_TOL));
    let one = Element::one(alg);

    let mut ode_residual = 0.0f64;
    for z in grid {
        let h = f64::EPSILON.powf(0.25) * z.norm().max(1.0);
        let step = one.scale(h);
        let gz = g(z);
        let second = (&(&g(&(z + &step)) - &gz.scale(2.0)) + &g(&(z - &step))).scale(1.0 / (h * h));
        ode_residual = ode_residual.max((&second + &gz).norm() / (1.0 + gz.norm()));
    }
    let zero = Element::zero(alg);
    let h = f64::EPSILON.cbrt();
    let step = one.scale(h);
    let deriv = (&g(&step) - &g(&-&step)).scale(0.5 / h);
    Ok(IvpReport {
        ode_residual,
        initial_value_residual: g(&zero).distance(f0),
        initial_derivative_residual: deriv.distance(f1),
    })
}
