//! Elementary functions defined by their power series, the N-trig and
//! N-hyperbolic families, special functions of generated algebras and the
//! Pythagorean determinant.

mod identities;
mod pythagorean;
mod special;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::power_series::{inv_factorial, majorant_cutoff};
use crate::series::default_max_terms;

pub use identities::{identity_suite, second_order_ivp_check, IdentityReport, IdentityResidual, IvpReport};
pub use pythagorean::{
    leibniz_det, pythagorean, pythagorean_report, PythagoreanEvaluation, PythagoreanReport, Ring, MAX_LEIBNIZ_DIM,
};
pub use special::{special_functions, SpecialFunctionTable};

/// Default absolute tail tolerance for the elementary functions.
pub const DEFAULT_TOL: f64 = 1e-17;

/// `sum_k s^k z^{Nk+p} / (Nk+p)!`, the residue class `p mod N` of the
/// exponential series with sign `s` per period.
///
/// Truncated where the majorant `sum (m |z|)^n / n!` over the class has
/// tail below `tol`, or at the global term cap.
pub(crate) fn residue_series(z: &Element, modulus: usize, residue: usize, sign: f64, tol: f64) -> Element {
    let alg = z.algebra();
    let r = alg.m_empirical() * z.norm();
    let coeff_norms = (0..).map(|n| if n % modulus == residue { inv_factorial(n) } else { 0.0 });
    let last = majorant_cutoff(coeff_norms, r, tol).unwrap_or(default_max_terms());

    let zn = z.pow(modulus);
    let mut term = z.pow(residue).scale(inv_factorial(residue));
    let mut acc = term.clone();
    let mut n = residue;
    while n + modulus <= last {
        let denom: f64 = (n + 1..=n + modulus).map(|k| k as f64).product();
        term = (&term * &zn).scale(sign / denom);
        n += modulus;
        if term.is_exact_zero() {
            break;
        }
        acc += &term;
    }
    acc
}

pub fn exp(z: &Element, tol: f64) -> Element {
    residue_series(z, 1, 0, 1.0, tol)
}

pub fn cosh(z: &Element, tol: f64) -> Element {
    residue_series(z, 2, 0, 1.0, tol)
}

pub fn sinh(z: &Element, tol: f64) -> Element {
    residue_series(z, 2, 1, 1.0, tol)
}

pub fn cos(z: &Element, tol: f64) -> Element {
    residue_series(z, 2, 0, -1.0, tol)
}

pub fn sin(z: &Element, tol: f64) -> Element {
    residue_series(z, 2, 1, -1.0, tol)
}

fn check_index(n: usize, p: usize) -> Result<()> {
    if n == 0 || p >= n {
        return Err(Error::BadIndex(format!("need 0 <= p < N, got N = {n}, p = {p}")));
    }
    Ok(())
}

/// `cos_N` for `p = 0`, otherwise `sin_{N,p}`: `sum (-1)^k z^{Nk+p} / (Nk+p)!`.
pub fn n_trig(n: usize, p: usize, z: &Element) -> Result<Element> {
    check_index(n, p)?;
    Ok(residue_series(z, n, p, -1.0, DEFAULT_TOL))
}

/// `cosh_N` for `p = 0`, otherwise `sinh_{N,p}`: `sum z^{Nk+p} / (Nk+p)!`.
pub fn n_hyperbolic(n: usize, p: usize, z: &Element) -> Result<Element> {
    check_index(n, p)?;
    Ok(residue_series(z, n, p, 1.0, DEFAULT_TOL))
}
