use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{Algebra, AlgebraSpec};
use crate::error::{Error, Result};

/// Norm below which an element counts as zero.
pub const TOL_ZERO: f64 = 1e-12;
/// Relative smallest-singular-value threshold separating units from zero divisors.
pub const TOL_SING: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Unit,
    ZeroDivisor,
    Zero,
}

/// A member of an algebra, stored as coordinates in the algebra's basis.
#[derive(Clone)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<f64>,
}

impl Element {
    pub fn new(algebra: &Algebra, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                coords.len(),
                algebra.dim()
            )));
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            coords,
        })
    }

    pub(crate) fn from_raw(algebra: &Algebra, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Self {
            algebra: Arc::clone(algebra),
            coords,
        }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::from_raw(algebra, vec![0.0; algebra.dim()])
    }

    pub fn one(algebra: &Algebra) -> Self {
        Self::from_raw(algebra, algebra.unity().to_vec())
    }

    /// `r` times the unity.
    pub fn scalar(algebra: &Algebra, r: f64) -> Self {
        Self::from_raw(algebra, algebra.unity().iter().map(|u| r * u).collect())
    }

    /// The `i`-th basis vector (0-based).
    pub fn basis(algebra: &Algebra, i: usize) -> Self {
        let mut c = vec![0.0; algebra.dim()];
        c[i] = 1.0;
        Self::from_raw(algebra, c)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean norm of the coordinates, computed after dividing by the
    /// largest magnitude.
    pub fn norm(&self) -> f64 {
        let big = self.coords.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if big == 0.0 || !big.is_finite() {
            return big;
        }
        big * self.coords.iter().map(|c| (c / big) * (c / big)).sum::<f64>().sqrt()
    }

    /// True when every coordinate is exactly `0.0`.
    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    pub fn belongs_to(&self, algebra: &Algebra) -> bool {
        Arc::ptr_eq(&self.algebra, algebra) || *self.algebra == **algebra
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub(crate) fn mul_unchecked(&self, other: &Element) -> Element {
        Element::from_raw(&self.algebra, self.algebra.mul_coords(&self.coords, &other.coords))
    }

    fn zip_with(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
        Element::from_raw(
            &self.algebra,
            self.coords.iter().zip(&other.coords).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn scale(&self, r: f64) -> Element {
        Element::from_raw(&self.algebra, self.coords.iter().map(|c| c * r).collect())
    }

    /// `self^n` by iterated left multiplication, `self^0 = 1`.
    pub fn pow(&self, n: usize) -> Element {
        let mut acc = Element::one(&self.algebra);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Euclidean distance between coordinate vectors.
    pub fn distance(&self, other: &Element) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Matrix of left multiplication by `self`: column `p` holds the
    /// coordinates of `self * v_p`.
    pub fn regular_rep(&self) -> DMatrix<f64> {
        left_mul_matrix(&self.algebra, &self.coords)
    }

    /// Matrix of right multiplication by `self`: column `p` holds the
    /// coordinates of `v_p * self`.
    pub fn right_rep(&self) -> DMatrix<f64> {
        right_mul_matrix(&self.algebra, &self.coords)
    }

    pub fn classify(&self) -> Classification {
        if self.norm() < TOL_ZERO {
            return Classification::Zero;
        }
        let sv = self.regular_rep().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min > TOL_SING * max {
            Classification::Unit
        } else {
            Classification::ZeroDivisor
        }
    }

    /// Solves `M(self) y = coords(1)`, with the singularity test applied to
    /// `self / |self|`.
    pub fn inverse(&self) -> Result<Element> {
        let s = self.norm();
        if s == 0.0 || !s.is_finite() {
            return Err(Error::NotInvertible);
        }
        let unit = self.scale(1.0 / s);
        if unit.classify() != Classification::Unit {
            return Err(Error::NotInvertible);
        }
        let rhs = DVector::from_column_slice(self.algebra.unity());
        let y = unit.regular_rep().lu().solve(&rhs).ok_or(Error::NotInvertible)?;
        Ok(Element::from_raw(&self.algebra, y.as_slice().iter().map(|v| v / s).collect()))
    }

    /// `self * other^{-1}`.
    pub fn div(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// Coordinates of `self` read as a multiple of unity, if it is one.
    pub fn as_real(&self, tol: f64) -> Option<f64> {
        let unity = self.algebra.unity();
        let uu: f64 = unity.iter().map(|u| u * u).sum();
        let r = self.coords.iter().zip(unity).map(|(c, u)| c * u).sum::<f64>() / uu;
        let resid = self
            .coords
            .iter()
            .zip(unity)
            .fold(0.0_f64, |m, (c, u)| m.max((c - r * u).abs()));
        (resid <= tol * (1.0 + r.abs())).then_some(r)
    }
}

pub(crate) fn left_mul_matrix(alg: &AlgebraSpec, x: &[f64]) -> DMatrix<f64> {
    let n = alg.dim();
    let mut m = DMatrix::zeros(n, n);
    for &(i, p, k, c) in &alg.products {
        m[(k, p)] += x[i] * c;
    }
    m
}

pub(crate) fn right_mul_matrix(alg: &AlgebraSpec, y: &[f64]) -> DMatrix<f64> {
    let n = alg.dim();
    let mut m = DMatrix::zeros(n, n);
    for &(p, j, k, c) in &alg.products {
        m[(k, p)] += y[j] * c;
    }
    m
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.coords)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.algebra.labels();
        let mut first = true;
        for (c, l) in self.coords.iter().zip(labels) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{l}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coords == other.coords
    }
}

// Operator impls panic on mismatched algebras; use the `checked_*` methods
// when operands come from untrusted sources.
macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                assert!(self.same_algebra(rhs), "elements belong to different algebras");
                $body(self, rhs)
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
        impl $trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Element, b: &Element| a.zip_with(b, |x, y| x + y));
binop!(Sub, sub, |a: &Element, b: &Element| a.zip_with(b, |x, y| x - y));
binop!(Mul, mul, |a: &Element, b: &Element| a.mul_unchecked(b));

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert!(self.same_algebra(rhs), "elements belong to different algebras");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, r: f64) -> Element {
        self.scale(r)
    }
}

impl Mul<f64> for Element {
    type Output = Element;
    fn mul(self, r: f64) -> Element {
        self.scale(r)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use nalgebra::dmatrix;

    fn h() -> Algebra {
        preset("hyperbolic").unwrap()
    }

    fn el(a: &Algebra, c: &[f64]) -> Element {
        Element::new(a, c.to_vec()).unwrap()
    }

    #[test]
    fn hyperbolic_zero_divisor_product() {
        let a = h();
        let p = el(&a, &[1.0, 1.0]) * el(&a, &[1.0, -1.0]);
        assert_eq!(p.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn complex_i_squared() {
        let c = preset("complex").unwrap();
        let i = Element::basis(&c, 1);
        assert_eq!((&i * &i).coords(), &[-1.0, 0.0]);
    }

    #[test]
    fn unity_is_neutral() {
        let a = preset("C_N:3").unwrap();
        let x = el(&a, &[0.3, -1.2, 2.5]);
        assert_eq!((Element::one(&a) * &x).coords(), x.coords());
        assert_eq!((&x * Element::one(&a)).coords(), x.coords());
    }

    #[test]
    fn regular_rep_examples() {
        let c = preset("complex").unwrap();
        assert_eq!(el(&c, &[3.0, 5.0]).regular_rep(), dmatrix![3.0, -5.0; 5.0, 3.0]);
        let h3 = preset("H_N:3").unwrap();
        let (x, y, z) = (2.0, 7.0, -3.0);
        assert_eq!(
            el(&h3, &[x, y, z]).regular_rep(),
            dmatrix![x, z, y; y, x, z; z, y, x]
        );
        assert_eq!(Element::one(&h3).regular_rep(), DMatrix::identity(3, 3));
    }

    #[test]
    fn classification() {
        let a = h();
        assert_eq!(el(&a, &[1.0, 1.0]).classify(), Classification::ZeroDivisor);
        assert_eq!(el(&a, &[2.0, 1.0]).classify(), Classification::Unit);
        assert_eq!(Element::zero(&a).classify(), Classification::Zero);
    }

    #[test]
    fn inverses() {
        let a = h();
        let inv = el(&a, &[2.0, 1.0]).inverse().unwrap();
        assert!((inv.coords()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((inv.coords()[1] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(Element::one(&a).inverse().unwrap().coords(), &[1.0, 0.0]);
        assert_eq!(el(&a, &[1.0, 1.0]).inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn mismatched_algebras() {
        let x = Element::one(&h());
        let y = Element::one(&preset("complex").unwrap());
        assert_eq!(x.checked_mul(&y).unwrap_err(), Error::AlgebraMismatch);
        // a structurally identical algebra built separately is the same algebra
        let x2 = Element::one(&h());
        assert!(x.checked_mul(&x2).is_ok());
    }

    #[test]
    fn as_real_detects_unity_multiples() {
        let a = preset("direct_product:2").unwrap();
        assert_eq!(el(&a, &[2.5, 2.5]).as_real(1e-12), Some(2.5));
        assert_eq!(el(&a, &[2.5, 2.0]).as_real(1e-12), None);
    }
}
