//! Numerical A-differentiability: Jacobians, the Cauchy–Riemann projection
//! residual, higher-order component relations, and curve integrals.

mod curve;

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

pub use curve::{curve_integral, Curve, CurveIntegral};

/// Relative residual below which a function counts as A-differentiable at
/// finite-difference accuracy.
pub const DIFFERENTIABLE_THRESHOLD: f64 = 1e-4;

type EvalFn = Arc<dyn Fn(&Element) -> Result<Element> + Send + Sync>;

/// A function `A -> A` given by a caller-supplied evaluator.
#[derive(Clone)]
pub struct AFunction {
    algebra: Algebra,
    eval: EvalFn,
}

impl AFunction {
    pub fn new(algebra: &Algebra, f: impl Fn(&Element) -> Element + Send + Sync + 'static) -> Self {
        Self::fallible(algebra, move |z| Ok(f(z)))
    }

    pub fn fallible(algebra: &Algebra, f: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static) -> Self {
        Self {
            algebra: algebra.clone(),
            eval: Arc::new(f),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Evaluates and checks the output: wrong algebra or non-finite values
    /// become `EvaluationFailure`.
    pub fn eval(&self, z: &Element) -> Result<Element> {
        let v = (self.eval)(z).map_err(|e| Error::EvaluationFailure(e.to_string()))?;
        if !v.belongs_to(&self.algebra) {
            return Err(Error::EvaluationFailure("result lies in a different algebra".into()));
        }
        if !v.is_finite() {
            return Err(Error::EvaluationFailure(format!("non-finite value at {z:?}")));
        }
        Ok(v)
    }
}

fn default_step(p: &Element, power: f64) -> f64 {
    f64::EPSILON.powf(power) * p.norm().max(1.0)
}

/// Central-difference Jacobian; column `j` is `(f(p + h v_j) - f(p - h v_j)) / 2h`.
/// `h = None` picks `eps^(1/3) * max(1, |p|)`.
pub fn numeric_jacobian(f: &AFunction, p: &Element, h: Option<f64>) -> Result<DMatrix<f64>> {
    if !p.belongs_to(f.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let h = h.unwrap_or_else(|| default_step(p, 1.0 / 3.0));
    let n = p.dim();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let step = Element::basis(f.algebra(), j).scale(h);
        let plus = f.eval(&(p + &step))?;
        let minus = f.eval(&(p - &step))?;
        for (i, (a, b)) in plus.coords().iter().zip(minus.coords()).enumerate() {
            jac[(i, j)] = (a - b) / (2.0 * h);
        }
    }
    Ok(jac)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrReport {
    #[serde(skip)]
    pub jacobian: DMatrix<f64>,
    /// Nearest member of `span{M(v_i)}` to the Jacobian (Frobenius norm).
    #[serde(skip)]
    pub projected: DMatrix<f64>,
    /// `|jacobian - projected|_F`
    pub residual: f64,
    /// `residual / |jacobian|_F` (zero when the Jacobian vanishes).
    pub relative_residual: f64,
    /// `projected` applied to the unity, i.e. the A-derivative estimate.
    pub a_derivative: Element,
    pub differentiable: bool,
}

/// Orthonormal basis (Frobenius inner product) of the span of the regular
/// representation matrices `M(v_1), ..., M(v_N)`.
fn regular_rep_basis(alg: &Algebra) -> Vec<DMatrix<f64>> {
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    for i in 0..alg.dim() {
        let mut m = Element::basis(alg, i).regular_rep();
        // modified Gram–Schmidt, run twice for stability
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&m);
                m -= q * c;
            }
        }
        let norm = m.norm();
        if norm > 1e-12 {
            basis.push(m / norm);
        }
    }
    basis
}

pub fn cr_residual(f: &AFunction, p: &Element) -> Result<CrReport> {
    let jacobian = numeric_jacobian(f, p, None)?;
    let basis = regular_rep_basis(f.algebra());
    let mut projected = DMatrix::zeros(p.dim(), p.dim());
    for q in &basis {
        projected += q * q.dot(&jacobian);
    }
    let residual = (&jacobian - &projected).norm();
    let jn = jacobian.norm();
    let relative_residual = if jn > 0.0 { residual / jn } else { 0.0 };
    let unity = nalgebra::DVector::from_column_slice(f.algebra().unity());
    let a_derivative = Element::new(f.algebra(), (&projected * unity).as_slice().to_vec())?;
    Ok(CrReport {
        jacobian,
        projected,
        residual,
        relative_residual,
        a_derivative,
        differentiable: relative_residual < DIFFERENTIABLE_THRESHOLD,
    })
}

/// Checks a homogeneous linear relation among partial derivatives of order
/// 1 or 2. `relation` lists `(indices, B)` pairs; it must satisfy
/// `sum B v_{i1} * ... * v_{ik} = 0` in the algebra. Returns the largest
/// component of `sum B d^k f / dx_{i1}...dx_{ik}` at `p`.
pub fn component_pde_check(f: &AFunction, p: &Element, relation: &[(Vec<usize>, f64)]) -> Result<f64> {
    let alg = f.algebra();
    let order = relation.first().map(|r| r.0.len()).unwrap_or(0);
    if relation.iter().any(|r| r.0.len() != order) || !(1..=2).contains(&order) {
        return Err(Error::UnsupportedRelation(
            "relations must be homogeneous of order 1 or 2".into(),
        ));
    }
    if let Some(bad) = relation.iter().flat_map(|r| &r.0).find(|&&i| i >= alg.dim()) {
        return Err(Error::BadIndex(format!("basis index {bad} out of range")));
    }
    let mut combo = Element::zero(alg);
    for (idx, b) in relation {
        let prod = idx
            .iter()
            .fold(Element::one(alg), |acc, &i| &acc * &Element::basis(alg, i));
        combo += &prod.scale(*b);
    }
    if combo.norm() >= 1e-12 {
        return Err(Error::RelationNotNull(combo.norm()));
    }

    let mut total = vec![0.0; alg.dim()];
    if order == 1 {
        let jac = numeric_jacobian(f, p, None)?;
        for (idx, b) in relation {
            for (k, t) in total.iter_mut().enumerate() {
                *t += b * jac[(k, idx[0])];
            }
        }
    } else {
        let h = default_step(p, 0.25);
        for (idx, b) in relation {
            let d = second_partial(f, p, idx[0], idx[1], h)?;
            for (t, v) in total.iter_mut().zip(d) {
                *t += b * v;
            }
        }
    }
    Ok(total.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Four-point stencil for `d^2 f / dx_i dx_j`.
fn second_partial(f: &AFunction, p: &Element, i: usize, j: usize, h: f64) -> Result<Vec<f64>> {
    let alg = f.algebra();
    let ei = Element::basis(alg, i).scale(h);
    let ej = Element::basis(alg, j).scale(h);
    let fpp = f.eval(&(&(p + &ei) + &ej))?;
    let fpm = f.eval(&(&(p + &ei) - &ej))?;
    let fmp = f.eval(&(&(p - &ei) + &ej))?;
    let fmm = f.eval(&(&(p - &ei) - &ej))?;
    Ok((0..alg.dim())
        .map(|k| (fpp.coords()[k] - fpm.coords()[k] - fmp.coords()[k] + fmm.coords()[k]) / (4.0 * h * h))
        .collect())
}
