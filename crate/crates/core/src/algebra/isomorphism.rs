use super::{preset, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoDirection {
    /// `(a, b) -> a (1+j)/2 + b (1-j)/2`
    ProductToHyperbolic,
    /// `x + jy -> (x+y, x-y)`
    HyperbolicToProduct,
}

/// The algebra isomorphism between R x R (componentwise product) and the
/// hyperbolic numbers, in either direction.
pub fn hyperbolic_isomorphism(direction: IsoDirection, x: &Element) -> Result<Element> {
    let product = preset("direct_product:2")?;
    let hyperbolic = preset("hyperbolic")?;
    let c = x.coords();
    match direction {
        IsoDirection::ProductToHyperbolic => {
            if !x.belongs_to(&product) {
                return Err(Error::AlgebraMismatch);
            }
            let (a, b) = (c[0], c[1]);
            Element::new(&hyperbolic, vec![(a + b) / 2.0, (a - b) / 2.0])
        }
        IsoDirection::HyperbolicToProduct => {
            if !x.belongs_to(&hyperbolic) {
                return Err(Error::AlgebraMismatch);
            }
            Element::new(&product, vec![c[0] + c[1], c[0] - c[1]])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(a: f64, b: f64) -> Element {
        Element::new(&preset("direct_product:2").unwrap(), vec![a, b]).unwrap()
    }

    fn h(x: f64, y: f64) -> Element {
        Element::new(&preset("hyperbolic").unwrap(), vec![x, y]).unwrap()
    }

    #[test]
    fn examples() {
        let psi = |e: &Element| hyperbolic_isomorphism(IsoDirection::ProductToHyperbolic, e).unwrap();
        assert_eq!(psi(&p(1.0, 0.0)).coords(), &[0.5, 0.5]);
        assert_eq!(psi(&p(1.0, 1.0)).coords(), &[1.0, 0.0]);
        let inv = hyperbolic_isomorphism(IsoDirection::HyperbolicToProduct, &h(3.0, 2.0)).unwrap();
        assert_eq!(inv.coords(), &[5.0, 1.0]);
    }

    #[test]
    fn wrong_algebra() {
        assert_eq!(
            hyperbolic_isomorphism(IsoDirection::ProductToHyperbolic, &h(1.0, 0.0)).unwrap_err(),
            Error::AlgebraMismatch
        );
        let c = Element::one(&preset("complex").unwrap());
        assert!(hyperbolic_isomorphism(IsoDirection::HyperbolicToProduct, &c).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_homomorphism(a in -10.0..10.0f64, b in -10.0..10.0f64,
                                       c in -10.0..10.0f64, d in -10.0..10.0f64) {
            let fwd = |e: &Element| hyperbolic_isomorphism(IsoDirection::ProductToHyperbolic, e).unwrap();
            let back = |e: &Element| hyperbolic_isomorphism(IsoDirection::HyperbolicToProduct, e).unwrap();
            let u = p(a, b);
            let v = p(c, d);
            prop_assert!(back(&fwd(&u)).distance(&u) < 1e-12);
            let lhs = fwd(&(&u * &v));
            let rhs = fwd(&u) * fwd(&v);
            prop_assert!(lhs.distance(&rhs) < 1e-10 * (1.0 + u.norm() * v.norm()));
        }
    }
}
