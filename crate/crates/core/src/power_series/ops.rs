use std::sync::{Arc, Mutex};

use super::{estimate_radii, PowerSeries, DEFAULT_PROBE};
use crate::algebra::{Algebra, Classification, Element};
use crate::error::{Error, Result};
use crate::series::{default_max_terms, SumResult};

/// `sum z^n` with unit coefficients.
pub fn geometric_series(algebra: &Algebra) -> PowerSeries {
    PowerSeries::real(algebra, |_| 1.0)
}

#[derive(Debug, Clone)]
pub struct GeometricEval {
    pub sum: SumResult,
    /// `|sum - (1 - z)^{-1}|` when `1 - z` is a unit.
    pub oracle_mismatch: Option<f64>,
}

pub fn geometric(algebra: &Algebra, z: &Element, tol: f64) -> Result<GeometricEval> {
    let sum = geometric_series(algebra).eval(z, tol)?;
    let one_minus = Element::one(algebra).checked_sub(z)?;
    let oracle_mismatch = if one_minus.classify() == Classification::Unit {
        Some(sum.value.distance(&one_minus.inverse()?))
    } else {
        None
    };
    Ok(GeometricEval { sum, oracle_mismatch })
}

/// The series `sum a_n z^n` with `c_n = a_n * 1`. Adds a warning to the
/// result when the coefficients do not look entire.
pub fn entire_extension(a: impl Fn(usize) -> f64 + Send + Sync + 'static, algebra: &Algebra) -> PowerSeries {
    let p = PowerSeries::real(algebra, a);
    match estimate_radii(&p, DEFAULT_PROBE) {
        Ok(r) if r.alpha_root == 0.0 => p,
        Ok(r) => p.with_warning(format!(
            "coefficients do not look entire: limsup |a_n|^(1/n) ~ {:.4}",
            r.alpha_root
        )),
        Err(e) => p.with_warning(format!("could not estimate radius: {e}")),
    }
}

/// Coefficients of the two factors and of the product computed so far.
type ProductCache = (Vec<Element>, Vec<Element>, Vec<Element>);

/// Cauchy product of two series about the same centre.
pub fn product_series(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    if !a.center().same_algebra(b.center()) {
        return Err(Error::AlgebraMismatch);
    }
    if a.center().coords() != b.center().coords() {
        return Err(Error::CenterMismatch);
    }
    let center = b.center().clone();
    let out_alg = b.algebra().clone();
    let (a, b) = (a.clone(), b.clone());
    let alg = a.algebra().clone();
    let cache: Arc<Mutex<ProductCache>> = Arc::default();
    let coeff = move |n: usize| {
        let mut guard = cache.lock().expect("coefficient cache poisoned");
        let (ca, cb, cc) = &mut *guard;
        while ca.len() <= n {
            ca.push(a.coeff(ca.len()));
            cb.push(b.coeff(cb.len()));
        }
        while cc.len() <= n {
            let m = cc.len();
            let mut acc = Element::zero(&alg);
            for k in 0..=m {
                acc += &(&ca[k] * &cb[m - k]);
            }
            cc.push(acc);
        }
        cc[n].clone()
    };
    PowerSeries::general(&out_alg, coeff).centered_at(&center)
}

/// Smallest `n` with `sum_{k>n} m^k |c_k| L^k < tol`, `m = m_empirical`.
///
/// The majorant is summed until its terms fall below `tol * 1e-6` over a
/// run of 16 consecutive indices. Fails when the series is not entire and
/// `L` reaches the root-test radius, or when the majorant does not decay
/// within the global term cap.
pub fn uniform_tail_bound(p: &PowerSeries, l: f64, tol: f64) -> Result<usize> {
    if !(l >= 0.0 && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("need L >= 0 and tol > 0, got L = {l}, tol = {tol}")));
    }
    let radii = estimate_radii(p, DEFAULT_PROBE)?;
    let radius = radii.r_root.value();
    if radii.alpha_root > 0.0 && l >= radius {
        return Err(Error::NotEntireAndBeyondRadius { l, radius });
    }
    let ml = radii.m_used * l;
    let norms = (0..).map(|k| p.coeff(k).norm());
    majorant_cutoff(norms, ml, tol).ok_or(Error::NotEntireAndBeyondRadius { l, radius })
}

/// Shared by [`uniform_tail_bound`] and the elementary functions: given
/// `|c_k|` in order and `r = m L`, the cutoff `n` for the tail
/// `sum_{k>n} |c_k| r^k < tol`.
pub(crate) fn majorant_cutoff(norms: impl Iterator<Item = f64>, r: f64, tol: f64) -> Option<usize> {
    const QUIET_RUN: usize = 16;
    let cap = default_max_terms();
    let ln_r = r.ln();
    let mut terms = Vec::new();
    let mut quiet = 0;
    for (k, c) in norms.enumerate() {
        if k >= cap {
            return None;
        }
        let t = if c == 0.0 {
            0.0
        } else if r == 0.0 {
            if k == 0 {
                c
            } else {
                0.0
            }
        } else {
            (c.ln() + k as f64 * ln_r).exp()
        };
        if !t.is_finite() {
            return None;
        }
        terms.push(t);
        quiet = if t < tol * 1e-6 { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN {
            break;
        }
    }
    let mut tail = 0.0;
    for n in (0..terms.len()).rev() {
        // tail == sum_{k>n} terms[k]
        if tail >= tol {
            return Some(n + 1);
        }
        tail += terms[n];
    }
    Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use crate::power_series::inv_factorial;

    #[test]
    fn geometric_matches_inverse() {
        let c = preset("complex").unwrap();
        let z = Element::new(&c, vec![0.0, 0.5]).unwrap();
        let g = geometric(&c, &z, 1e-14).unwrap();
        assert!(g.sum.converged());
        assert!(g.oracle_mismatch.unwrap() < 1e-10);
        let g0 = geometric(&c, &Element::zero(&c), 1e-14).unwrap();
        assert_eq!(g0.sum.value, Element::one(&c));
    }

    #[test]
    fn geometric_at_zero_divisor_has_no_oracle() {
        let h = preset("hyperbolic").unwrap();
        // 1 - z = (1 - j)/2 is a zero divisor
        let z = Element::new(&h, vec![0.5, 0.5]).unwrap();
        assert!(geometric(&h, &z, 1e-12).unwrap().oracle_mismatch.is_none());
    }

    #[test]
    fn tail_bound_examples() {
        let c = preset("complex").unwrap();
        assert_eq!(uniform_tail_bound(&geometric_series(&c), 0.5, 1e-10).unwrap(), 34);
        assert_eq!(uniform_tail_bound(&PowerSeries::real(&c, |_| 0.0), 1.0, 1e-10).unwrap(), 0);
        let h = preset("hyperbolic").unwrap();
        let n = uniform_tail_bound(&PowerSeries::real(&h, inv_factorial), 2.0, 1e-12).unwrap();
        assert!(n <= 40, "{n}");
        let err = uniform_tail_bound(&geometric_series(&c), 1.5, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NotEntireAndBeyondRadius { .. }));
    }

    #[test]
    fn entire_extension_warns_on_finite_radius() {
        let h = preset("hyperbolic").unwrap();
        assert!(entire_extension(inv_factorial, &h).warnings().is_empty());
        assert_eq!(entire_extension(|_| 1.0, &h).warnings().len(), 1);
    }

    #[test]
    fn product_series_centres() {
        let h = preset("hyperbolic").unwrap();
        let a = geometric_series(&h);
        let b = geometric_series(&h).centered_at(&Element::one(&h)).unwrap();
        assert_eq!(product_series(&a, &b).unwrap_err(), Error::CenterMismatch);
        let c = preset("complex").unwrap();
        assert_eq!(product_series(&a, &geometric_series(&c)).unwrap_err(), Error::AlgebraMismatch);
        let one = PowerSeries::real(&h, |n| if n == 0 { 1.0 } else { 0.0 });
        let p = product_series(&one, &a).unwrap();
        for n in 0..10 {
            assert_eq!(p.coeff(n), a.coeff(n));
        }
    }
}
