use std::sync::{Arc, Mutex};

use super::TermStream;
use crate::algebra::Element;
use crate::error::{Error, Result};

/// The convolution `c_n = sum_{k<=n} a_k * b_{n-k}`. Both inputs are memoised
/// and the output caches its own terms, so a sequential pass costs O(n^2)
/// products in total.
pub fn cauchy_product(a: &TermStream, b: &TermStream) -> Result<TermStream> {
    if !Element::zero(a.algebra()).belongs_to(b.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let a = a.memoized();
    let b = b.memoized();
    let max_terms = a.max_terms().min(b.max_terms());
    let alg = a.algebra().clone();
    let out_alg = alg.clone();
    let cache: Arc<Mutex<Vec<Element>>> = Arc::new(Mutex::new(Vec::new()));
    let term = move |n: usize| {
        if let Some(t) = cache.lock().expect("cache poisoned").get(n) {
            return t.clone();
        }
        let mut acc = Element::zero(&alg);
        for k in 0..=n {
            acc += &(&a.term(k) * &b.term(n - k));
        }
        let mut c = cache.lock().expect("cache poisoned");
        if c.len() == n {
            c.push(acc.clone());
        }
        acc
    };
    Ok(TermStream::new(&out_alg, term).with_max_terms(max_terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use crate::series::sum;

    #[test]
    fn unit_impulse_is_identity() {
        let c = preset("C_N:3").unwrap();
        let (a1, a2) = (c.clone(), c.clone());
        let delta = TermStream::new(&c, move |n| if n == 0 { Element::one(&a1) } else { Element::zero(&a1) });
        let b = TermStream::new(&c, move |n| Element::new(&a2, vec![n as f64, 1.0, -(n as f64)]).unwrap());
        let p = cauchy_product(&delta, &b).unwrap();
        for n in 0..20 {
            assert_eq!(p.term(n), b.term(n));
        }
    }

    #[test]
    fn geometric_square() {
        let c = preset("complex").unwrap();
        let z = Element::new(&c, vec![0.3, 0.4]).unwrap();
        let zz = z.clone();
        let g = TermStream::new(&c, move |n| zz.pow(n));
        let p = cauchy_product(&g, &g).unwrap();
        let r = sum(&p, 1e-13, 8).unwrap();
        assert!(r.converged());
        let one = Element::one(&c);
        let inv = (&one - &z).inverse().unwrap();
        assert!(r.value.distance(&(&inv * &inv)) < 1e-11);
    }

    #[test]
    fn mismatch() {
        let c = preset("complex").unwrap();
        let h = preset("hyperbolic").unwrap();
        let (a, b) = (c.clone(), h.clone());
        let s1 = TermStream::new(&c, move |_| Element::one(&a));
        let s2 = TermStream::new(&h, move |_| Element::one(&b));
        assert_eq!(cauchy_product(&s1, &s2).unwrap_err(), Error::AlgebraMismatch);
    }
}
